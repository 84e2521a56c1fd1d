"""JSON model descriptions (spec files).

Every spec is an object with a ``"family"`` discriminator.  Probabilities
may be JSON numbers or ``"p/q"`` strings; strings and integers are kept as
exact rationals, so validation of purely rational specs is exact.

    {"family": "bernoulli", "probs": ["1/2", "1/2"]}
    {"family": "bernoulli", "pi": 0.3}                        # base 2, P(digit 1)
    {"family": "markov", "q": 2, "order": 1,
     "initial": ["2/3", "1/3"], "transitions": [["1/2", "1/2"], [1, 0]]}
    {"family": "markov", "preset": "ising", "pi": "1/3"}
    {"family": "markov", "preset": "two_state", "p0": 1, "p1": "1/2"}
    {"family": "renewal", "interarrival": {"kind": "degenerate", "k": 2}}
    {"family": "renewal", "interarrival": {"kind": "geometric", "p": "1/2"}}
    {"family": "renewal", "interarrival": {"kind": "nb2", "pi": 0.5}}
    {"family": "renewal", "interarrival": {"kind": "table", "pmf": ["1/5", 0, "3/10"],
                                           "tail_ratio": "1/2"}}
    {"family": "mixture", "kind": "beta-ising", "shapes": [1, 1]}
    {"family": "mixture", "kind": "discrete-mixture",
     "components": [{"weight": "1/2", "model": {...}}, ...]}
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ValidationError
from .models import BernoulliSpec, MarkovSpec, MixtureSpec, Model, RenewalSpec, num

FAMILIES = ("bernoulli", "markov", "renewal", "mixture")


def _need(d: dict, key: str):
    if key not in d:
        raise ValidationError(f"missing field {key!r}")
    return d[key]


def _nums(values) -> tuple:
    if not isinstance(values, list):
        raise ValidationError(f"expected a list of probabilities, got {values!r}")
    try:
        return tuple(num(v) for v in values)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad number in {values!r}: {exc}") from None


def _num(v):
    return _nums([v])[0]


def model_from_dict(d: dict) -> Model:
    """Build an (unvalidated) model from a parsed JSON object."""
    if not isinstance(d, dict):
        raise ValidationError("a model spec must be a JSON object")
    family = d.get("family")
    if family == "bernoulli":
        if "pi" in d:
            return BernoulliSpec.riesz_nagy(_num(d["pi"]))
        probs = _nums(_need(d, "probs"))
        if "q" in d and int(d["q"]) != len(probs):
            raise ValidationError(f"q={d['q']} but {len(probs)} probabilities given")
        return BernoulliSpec(probs)
    if family == "markov":
        preset = d.get("preset")
        if preset == "ising":
            return MarkovSpec.ising(_num(_need(d, "pi")))
        if preset == "two_state":
            return MarkovSpec.two_state(_num(_need(d, "p0")), _num(_need(d, "p1")))
        if preset is not None:
            raise ValidationError(f"unknown markov preset {preset!r}")
        q = int(_need(d, "q"))
        order = int(d.get("order", 1))
        rows = _need(d, "transitions")
        if not isinstance(rows, list):
            raise ValidationError("transitions must be a list of rows")
        initial = _nums(d["initial"]) if order > 0 else (Fraction(1),)
        return MarkovSpec(q, order + 1, initial, tuple(_nums(r) for r in rows))
    if family == "renewal":
        ia = _need(d, "interarrival")
        if not isinstance(ia, dict):
            raise ValidationError("interarrival must be a JSON object")
        kind = ia.get("kind")
        if kind == "degenerate":
            return RenewalSpec.degenerate(int(_need(ia, "k")))
        if kind == "geometric":
            return RenewalSpec.geometric(_num(_need(ia, "p")))
        if kind == "nb2":
            return RenewalSpec.nb2(_num(_need(ia, "pi")))
        if kind == "table":
            return RenewalSpec.table(_nums(_need(ia, "pmf")), _num(ia.get("tail_ratio", 0)))
        raise ValidationError(f"unknown interarrival kind {kind!r}")
    if family == "mixture":
        kind = _need(d, "kind")
        if kind == "discrete-mixture":
            comps = _need(d, "components")
            return MixtureSpec.discrete(
                [(_num(_need(c, "weight")), model_from_dict(_need(c, "model"))) for c in comps])
        return MixtureSpec(kind, tuple(float(v) for v in _nums(_need(d, "shapes"))))
    raise ValidationError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _out(v) -> Any:
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    return float(v)


def model_to_dict(model: Model) -> dict:
    if isinstance(model, BernoulliSpec):
        return {"family": "bernoulli", "probs": [_out(p) for p in model.probs]}
    if isinstance(model, MarkovSpec):
        return {"family": "markov", "q": model.q, "order": model.m - 1,
                "initial": [_out(p) for p in model.initial],
                "transitions": [[_out(p) for p in r] for r in model.transitions]}
    if isinstance(model, RenewalSpec):
        if model.kind == "nb2":
            ia = {"kind": "nb2", "pi": _out(model.pi)}
        elif model.kind == "degenerate":
            ia = {"kind": "degenerate", "k": model.degenerate_k()}
        elif model.kind == "geometric":
            ia = {"kind": "geometric", "p": _out(1 - model.tail_ratio)}
        else:
            ia = {"kind": "table", "pmf": [_out(p) for p in model.pmf_table],
                  "tail_ratio": _out(model.tail_ratio)}
        return {"family": "renewal", "interarrival": ia}
    if isinstance(model, MixtureSpec):
        if model.kind == "discrete-mixture":
            return {"family": "mixture", "kind": model.kind,
                    "components": [{"weight": _out(w), "model": model_to_dict(m)}
                                   for w, m in model.components]}
        return {"family": "mixture", "kind": model.kind, "shapes": list(model.shapes)}
    raise TypeError(f"unsupported model {type(model).__name__}")


def load_spec(path, validate: bool = True) -> Model:
    """Read a JSON spec file (``"-"`` for stdin)."""
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from None
    model = model_from_dict(data)
    return model.validate() if validate else model
