"""The five panels of the reference figure and their caption-stated curve orderings.

Each panel is a sweep of models plus probe points at which the curves must
appear in a prescribed strict order (largest first).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cdf import eval_cdf
from .models import BernoulliSpec, MarkovSpec, MixtureSpec, Model, RenewalSpec
from .zoo import SWEEP

PANELS = ("a", "b", "c", "d", "e")
MIN_MARGIN = 1e-6


@dataclass(frozen=True)
class Panel:
    name: str
    title: str
    curves: tuple[tuple[str, Model], ...]
    # (x, labels from the largest F(x) to the smallest)
    orderings: tuple[tuple[Fraction, tuple[str, ...]], ...]


@dataclass(frozen=True)
class OrderingCheck:
    panel: str
    x: Fraction
    upper: str
    lower: str
    margin: float

    @property
    def passed(self) -> bool:
        return self.margin > MIN_MARGIN


def _pi_label(p) -> str:
    return f"pi={float(p):.1f}"


def _shape_label(b0, b1) -> str:
    return f"F_{{{b0:.1f},{b1:.1f}}}"


def _chain(pairs: Sequence[tuple[float, float]]) -> tuple[str, ...]:
    return tuple(_shape_label(a, b) for a, b in pairs)


BETA_GRID = tuple((a, b) for a in (0.5, 1.0, 1.5) for b in (0.5, 1.0, 1.5))

# Beta-Poisson mixture at x = 1/4, shapes (b0, b1) of Pi_0 = P(digit 0).
# The published chain lists the same nine curves with the two shape
# subscripts exchanged.
CHAIN_D = _chain([(1.5, 0.5), (1.0, 0.5), (1.5, 1.0), (0.5, 0.5), (1.0, 1.0),
                  (1.5, 1.5), (1.0, 1.5), (0.5, 1.0), (0.5, 1.5)])

# Beta-Ising mixture at x = 1/8, shapes of the switch probability.
# The published chain repeats one curve; the last three places are fixed by
# direct evaluation and coincide with the pattern of the beta-Poisson chain.
CHAIN_E = _chain([(0.5, 1.5), (0.5, 1.0), (1.0, 1.5), (0.5, 0.5), (1.0, 1.0),
                  (1.5, 1.5), (1.5, 1.0), (1.0, 0.5), (1.5, 0.5)])


def panel(name: str) -> Panel:
    if name == "a":
        curves = tuple((_pi_label(p), BernoulliSpec.riesz_nagy(p).validate()) for p in SWEEP)
        return Panel("a", "Riesz-Nagy functions", curves,
                     ((Fraction(1, 2), tuple(l for l, _ in curves)),))
    if name == "b":
        curves = tuple((_pi_label(p), MarkovSpec.ising(p).validate()) for p in SWEEP)
        labels = tuple(l for l, _ in curves)
        return Panel("b", "Ising chains", curves,
                     ((Fraction(1, 4), labels), (Fraction(3, 4), labels[::-1])))
    if name == "c":
        curves = tuple((_pi_label(p), RenewalSpec.nb2(p).validate()) for p in SWEEP)
        return Panel("c", "nb2 renewal processes", curves,
                     ((Fraction(1, 2), tuple(l for l, _ in curves)[::-1]),))
    if name == "d":
        curves = tuple((_shape_label(a, b), MixtureSpec("dirichlet-bernoulli", (a, b)).validate())
                       for a, b in BETA_GRID)
        return Panel("d", "beta mixtures of Bernoulli schemes", curves, ((Fraction(1, 4), CHAIN_D),))
    if name == "e":
        curves = tuple((_shape_label(a, b), MixtureSpec("beta-ising", (a, b)).validate())
                       for a, b in BETA_GRID)
        return Panel("e", "beta mixtures of Ising chains", curves, ((Fraction(1, 8), CHAIN_E),))
    raise ValueError(f"unknown panel {name!r}; expected one of {PANELS}")


def check_orderings(p: Panel, tol: float = 1e-13) -> list[OrderingCheck]:
    """Certified margins ``lower bound of F_upper - upper bound of F_lower`` for each adjacent pair."""
    models = dict(p.curves)
    out = []
    for x, labels in p.orderings:
        vals = {l: eval_cdf(models[l], x, tol) for l in labels}
        for hi, lo in zip(labels, labels[1:]):
            out.append(OrderingCheck(p.name, x, hi, lo, vals[hi].value - vals[lo].upper))
    return out
