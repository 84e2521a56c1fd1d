"""Evaluation of ``F(x) = P(X <= x)`` with a rigorous truncation bound.

For ``x = (0.x_1 x_2 ...)_q`` in non-terminating form

    F(x) = sum_{n: x_n >= 1} sum_{k < x_n} p(x_1..x_{n-1}, k) + P(X = x).

After ``n`` digits the part not yet summed plus the atom at ``x`` lies in the
current cylinder, so the true value is within ``[S + atom, S + p(x_1..x_n)]``.
When the remaining digits are all ``q - 1`` the whole cylinder lies below
``x`` and the sum closes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .digits import (DIGIT_CAP, DigitExpansion, PointConfiguration, as_expansion,
                     as_fraction, is_base_q_fraction)
from .errors import Inconclusive, NoConvergence, ZeroDenominator
from .models import (BernoulliSpec, MarkovSpec, MixtureSpec, Model, RenewalSpec,
                     finite_dim_prob)

DEFAULT_TOL = 1e-13
MAX_DEPTH = 10**4
CONTINUITY_THRESHOLD = 1e-14


@dataclass(frozen=True)
class CdfValue:
    """``F(x)`` lies in ``[value, value + truncation_bound]``; ``value`` includes the atom."""

    value: float
    truncation_bound: float
    atom_mass_at_x: float
    depth_used: int

    @property
    def upper(self) -> float:
        return self.value + self.truncation_bound

    @property
    def midpoint(self) -> float:
        return self.value + 0.5 * self.truncation_bound

    @property
    def left_limit(self) -> float:
        return self.value - self.atom_mass_at_x


UNIFORM = "Uniform"
DISCRETE = "DiscreteUniformOnOrbit"
SINGULAR = "SingularContinuous"
MIXED = "MixedSingular"
UNKNOWN = "Unknown"
VERDICTS = (UNIFORM, DISCRETE, SINGULAR, MIXED, UNKNOWN)


@dataclass(frozen=True)
class Classification:
    verdict: str
    reason: str
    atoms: Optional[tuple[tuple[Fraction, float], ...]] = None
    uniform_weight: float = 0.0

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "uniform_weight": self.uniform_weight,
            "atoms": None if self.atoms is None else
            [{"x": str(s), "mass": m} for s, m in self.atoms],
        }


# ---------------------------------------------------------------------------
# F(x)
# ---------------------------------------------------------------------------


def eval_cdf(model: Model, x, tol: float = DEFAULT_TOL, max_depth: int = MAX_DEPTH,
             raise_on_cap: bool = True) -> CdfValue:
    """``F(x)`` for an exact rational or a :class:`DigitExpansion` ``x``.

    With ``raise_on_cap=False`` the depth cap returns the current interval
    instead of raising :class:`NoConvergence`.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    q = model.q
    exp = as_expansion(x, q)
    atom = model.atom_at(exp.value)
    top_start = exp.constant_tail_start(q - 1)
    zero_start = exp.constant_tail_start(0)
    cyl = model.cylinder()
    terms: list[float] = []
    digits = iter(exp)
    n = 0
    while True:
        if top_start is not None and n >= top_start:
            return CdfValue(min(math.fsum(terms) + cyl.mass, 1.0), 0.0, atom, n)
        if zero_start is not None and n >= zero_start:
            return CdfValue(math.fsum(terms) + atom, 0.0, atom, n)
        gap = cyl.mass - atom
        if gap <= tol:
            return CdfValue(math.fsum(terms) + atom, max(gap, 0.0), atom, n)
        if n >= max_depth:
            s = math.fsum(terms)
            if raise_on_cap:
                raise NoConvergence(
                    f"cylinder mass {cyl.mass:.3g} still above tolerance after {n} digits",
                    CdfValue(s + atom, gap, atom, n))
            return CdfValue(s + atom, gap, atom, n)
        d = next(digits)
        if d:
            terms.extend(cyl.masses()[:d])
        cyl = cyl.child(d)
        n += 1


def eval_cdf_point_process(model: Model, y: PointConfiguration, tail="ones",
                           tol: float = DEFAULT_TOL, max_depth: int = MAX_DEPTH) -> CdfValue:
    """Base-2 evaluation as ``sum_{n in y} P(Y_{n-1} = y_{n-1}, n not in Y)``.

    ``y`` lists the 1-digits up to ``y.horizon``; ``tail`` says what follows:
    ``"ones"`` (every later index is a point), ``"zeros"`` (no more points,
    a terminating expansion), a periodic block of digits, or ``None`` (unknown
    continuation: the partial sum is returned with the cylinder mass as bound).
    Each term is evaluated from the closed-form finite-dimensional law.
    """
    if model.q != 2:
        raise ValueError("point-process evaluation needs base 2")
    prefix = y.to_digits()
    if tail is None:
        s = math.fsum(finite_dim_prob(model, prefix[:n - 1] + (0,)) for n in y.points)
        return CdfValue(s, finite_dim_prob(model, prefix), 0.0, y.horizon)
    if tail == "zeros":
        e = DigitExpansion.from_prefix(prefix, 2, "zeros")
        atom = model.atom_at(e.value)
        s = math.fsum(finite_dim_prob(model, prefix[:n - 1] + (0,)) for n in y.points)
        return CdfValue(s + atom, 0.0, atom, y.horizon)
    if tail == "ones":
        e = DigitExpansion.from_prefix(prefix, 2, "max")
        atom = model.atom_at(e.value)
        s = math.fsum(finite_dim_prob(model, prefix[:n - 1] + (0,)) for n in y.points)
        return CdfValue(min(s + finite_dim_prob(model, prefix), 1.0), 0.0, atom, y.horizon)
    block = tuple(tail)
    e = DigitExpansion.from_prefix(prefix, 2, block)
    atom = model.atom_at(e.value)
    digits = list(prefix)
    terms = [finite_dim_prob(model, prefix[:n - 1] + (0,)) for n in y.points]
    i = 0
    while True:
        mass = finite_dim_prob(model, digits)
        if mass - atom <= tol:
            return CdfValue(math.fsum(terms) + atom, max(mass - atom, 0.0), atom, len(digits))
        if len(digits) >= max_depth:
            raise NoConvergence(f"no convergence within {max_depth} digits")
        d = block[i % len(block)]
        i += 1
        if d:
            terms.append(finite_dim_prob(model, digits + [0]))
        digits.append(d)


def eval_grid(model: Model, xs: Sequence, tol: float = DEFAULT_TOL) -> list[CdfValue]:
    return [eval_cdf(model, x, tol) for x in xs]


# ---------------------------------------------------------------------------
# Continuity, monotonicity, derivative diagnostics
# ---------------------------------------------------------------------------


def is_continuous_at(model: Model, x) -> tuple[bool, float]:
    """``(continuous, P(X = x))`` from the family's analytic atom rule."""
    exp = as_expansion(x, model.q)
    mass = model.atom_at(exp.value)
    return mass <= CONTINUITY_THRESHOLD, mass


def limiting_cylinder_mass(model: Model, x, depth: int = 2000,
                           threshold: float = CONTINUITY_THRESHOLD) -> tuple[bool, float]:
    """Walk the non-terminating ray of ``x``: ``(mass fell below threshold, last mass)``."""
    cyl = model.cylinder()
    for d in as_expansion(x, model.q).digits(depth):
        if cyl.mass < threshold:
            return True, cyl.mass
        cyl = cyl.child(d)
    return cyl.mass < threshold, cyl.mass


def _ray_positive(model: Model, e: DigitExpansion) -> bool:
    """Whether ``p(x_1..x_n) > 0`` for every ``n`` along the eventually periodic ray ``e``."""
    pre, per = e.periodic_form()
    if isinstance(model, BernoulliSpec):
        return all(model.pi[d] > 0 for d in set(pre) | set(per))
    if isinstance(model, MarkovSpec):
        c = model.context_length
        q = model.q
        n = len(pre) + c + len(per) + 1
        digits = e.digits(n)
        if c:
            idx = 0
            for d in digits[:c]:
                idx = idx * q + d
            if model.marginals[c][idx] <= 0:
                return False
        for s in range(n - c):
            ctx = 0
            for d in digits[s:s + c]:
                ctx = ctx * q + d
            if model._trans[ctx][digits[s + c]] <= 0:
                return False
        return True
    if isinstance(model, RenewalSpec):
        r, L = len(pre), len(per)
        digits = e.digits(r + 2 * L + 2)
        pts = [i + 1 for i, d in enumerate(digits) if d]
        infinite = 1 in per
        if not pts:
            return model.unbounded_support
        if float(model.delay_pmf(pts[0])) <= 0:
            return False
        if any(float(model.pmf(b - a)) <= 0 for a, b in zip(pts, pts[1:])):
            return False
        return True if infinite else model.unbounded_support
    if isinstance(model, MixtureSpec):
        if model.kind == "discrete-mixture":
            return any(w > 0 and _ray_positive(m, e)
                       for w, (_, m) in zip(model._weights, model.components))
        # continuous beta/Dirichlet mixing: every cylinder has positive mass
        return True
    raise Inconclusive(f"no positivity rule for {type(model).__name__}")


def is_strictly_increasing_at(model: Model, x) -> bool:
    """``F(x - eps) < F(x + eps)`` for every ``eps > 0``.

    At a base-q fraction either of its two expansions may carry the mass.
    """
    q = model.q
    if isinstance(x, DigitExpansion):
        value = x.value
        if is_base_q_fraction(value, q) is None:
            return _ray_positive(model, x)
    else:
        value = as_fraction(x)
    e = DigitExpansion.from_rational(value, q, "non_terminating")
    if is_base_q_fraction(value, q) is None:
        return _ray_positive(model, e)
    return _ray_positive(model, e) or _ray_positive(model, e.terminating())


def derivative_estimate(model: Model, x, depth: int) -> list[float]:
    """``q^k p(x_1..x_k)`` for ``k = 1..depth`` (likelihood ratio against Lebesgue)."""
    q = model.q
    if isinstance(x, DigitExpansion):
        # an explicit expansion fixes the ray, even at a base-q fraction
        e = x
        if e.base != q:
            raise ValueError("expansion base does not match the model")
    else:
        e = as_expansion(x, q)
        if is_base_q_fraction(e.value, q) is not None:
            raise ValueError("a base-q fraction has two rays; pass a DigitExpansion to choose one")
    out = []
    cyl = model.cylinder()
    ratio = 1.0
    for d in e.digits(depth):
        parent = cyl.mass
        cyl = cyl.child(d)
        if parent <= 0 or ratio == 0:
            ratio = 0.0
        elif parent < 1e-290:
            # parent mass is close to underflow; continue in logs
            ratio = math.exp(math.log(ratio) + math.log(q) + math.log(cyl.mass) - math.log(parent)) \
                if cyl.mass > 0 else 0.0
        else:
            ratio *= q * (cyl.mass / parent)
        out.append(ratio)
    return out


def predictive_ratio(model: Model, prefix: Sequence[int], continuation: Sequence[int]) -> list[float]:
    """``p(x_1..x_n, xi) / p(x_1..x_n, xi_1..xi_{m-1})`` for ``n = 0..len(prefix)``."""
    prefix, cont = tuple(prefix), tuple(continuation)
    if not cont:
        raise ValueError("continuation must be non-empty")
    out = []
    for n in range(len(prefix) + 1):
        head = prefix[:n] + cont[:-1]
        den = finite_dim_prob(model, head)
        if den <= 0:
            raise ZeroDenominator(f"p{head} = 0")
        out.append(finite_dim_prob(model, head + cont[-1:]) / den)
    return out


# ---------------------------------------------------------------------------
# Pure-type classification
# ---------------------------------------------------------------------------


def _atoms_verdict(atoms, n_orbits: int, reason_disc: str, reason_sing: str) -> Classification:
    atoms = tuple(sorted(atoms))
    total = sum(m for _, m in atoms)
    if not atoms:
        return Classification(SINGULAR, reason_sing, None)
    if abs(total - 1.0) <= 1e-12:
        if n_orbits == 1:
            return Classification(DISCRETE, reason_disc, atoms)
        return Classification(MIXED, reason_disc + "; several periodic orbits", atoms)
    return Classification(MIXED, reason_disc + f"; discrete part of mass {total:.6g}", atoms)


def _orbit_count(model: Model) -> int:
    if isinstance(model, MarkovSpec):
        return len(model.atom_orbits())
    return len(model.atoms())


def classify(model: Model) -> Classification:
    """Pure-type verdict for the supported families; ``Unknown`` outside them."""
    if isinstance(model, BernoulliSpec):
        q = model.q
        if all(abs(p - 1.0 / q) <= 1e-15 for p in model.pi):
            return Classification(UNIFORM, f"IID uniform digits in base {q}", None, 1.0)
        return _atoms_verdict(model.atoms(), _orbit_count(model),
                              "Bernoulli scheme with a degenerate digit law",
                              "non-uniform Bernoulli scheme: singular, no atoms")
    if isinstance(model, MarkovSpec):
        q = model.q
        uniform = all(abs(p - 1.0 / q) <= 1e-15 for row in model._trans for p in row)
        if uniform:
            return Classification(UNIFORM, "Markov chain with all transitions 1/q (IID uniform)",
                                  None, 1.0)
        return _atoms_verdict(model.atoms(), _orbit_count(model),
                              "Markov chain with deterministic transition cycles",
                              "non-uniform stationary Markov chain: singular, no deterministic cycles")
    if isinstance(model, RenewalSpec):
        if model.is_geometric_mean_two():
            return Classification(UNIFORM, "renewal with geometric interarrivals of mean 2",
                                  None, 1.0)
        k = model.degenerate_k()
        if k is not None:
            return Classification(DISCRETE, f"renewal with degenerate interarrival k={k}",
                                  tuple(sorted(model.atoms())))
        return Classification(SINGULAR, "renewal, interarrival neither geometric(1/2) nor degenerate")
    if isinstance(model, MixtureSpec):
        if model.kind == "discrete-mixture":
            parts = [(w, classify(m)) for w, (_, m) in zip(model._weights, model.components)
                     if w > 0]
            if any(c.verdict == UNKNOWN for _, c in parts):
                return Classification(UNKNOWN, "a mixture component is outside the known families")
            uw = math.fsum(w * c.uniform_weight for w, c in parts)
            atoms = tuple(model.atoms()) or None
            verdicts = {c.verdict for _, c in parts}
            if len(verdicts) == 1 and verdicts != {DISCRETE}:
                v = verdicts.pop()
                return Classification(v, f"discrete mixture, every component {v}", atoms, uw)
            if verdicts == {DISCRETE} and len({c.atoms for _, c in parts}) == 1:
                return Classification(DISCRETE, "discrete mixture of identical orbit laws", atoms, uw)
            return Classification(MIXED, "discrete mixture of components of different type",
                                  atoms, uw)
        label = {"dirichlet-bernoulli": "Dirichlet mixture of Bernoulli schemes",
                 "beta-ising": "beta mixture of Ising chains",
                 "beta-renewal-nb2": "beta mixture of nb2 renewal processes"}.get(model.kind)
        if label is None:
            return Classification(UNKNOWN, f"unsupported mixture kind {model.kind!r}")
        return Classification(SINGULAR, f"{label}: continuous mixing law, no uniform component")
    return Classification(UNKNOWN, f"unsupported model {type(model).__name__}")
