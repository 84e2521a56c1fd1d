"""Stationary digit models and their finite-dimensional probabilities.

Four families are supported: Bernoulli schemes, stationary Markov chains of
any order, binary processes driven by a stationary delayed renewal process,
and mixtures of these.  Each model offers two independent routes to the
cylinder masses ``p(x_1, ..., x_n)``:

* :meth:`Model.cylinder` walks the digit tree one digit at a time (used by the
  CDF evaluator, which needs every sibling mass along a ray);
* :func:`finite_dim_prob` evaluates a closed form for a whole prefix.

Parameters may be exact rationals (``Fraction``) or floats.  Validation is
exact when every parameter is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from .digits import DIGIT_CAP, prefix_stats
from .errors import (BadShape, InfiniteMean, NonStochasticRow, NotInvariant,
                     PrefixTooLong, ValidationError)
from .special import beta_expectation_nodes, log_beta, log_multivariate_beta

Number = Union[Fraction, float]

SUM_TOL = 1e-12
INVARIANCE_TOL = 1e-10
RENEWAL_TABLE_SIZE = 512
GAUSS_JACOBI_NODES = 200


def num(v) -> Number:
    """Parse a parameter: ``"p/q"`` strings and ints become exact, floats stay floats."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("boolean is not a probability")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    return float(v)


def _all_exact(values) -> bool:
    return all(isinstance(v, Fraction) for v in values)


def _normalise(values: Sequence[Number], what: str) -> tuple[Number, ...]:
    values = tuple(values)
    if any(v < 0 for v in values):
        raise NonStochasticRow(f"{what} has a negative entry: {values}")
    total = sum(values)
    if abs(total - 1) > SUM_TOL:
        raise NonStochasticRow(f"{what} sums to {float(total)!r}, not 1")
    if total == 1:
        return values
    return tuple(v / total for v in values)


class Model:
    """Common interface of every digit model."""

    q: int
    family: str

    def cylinder(self) -> "Cylinder":
        raise NotImplementedError

    def atoms(self) -> list[tuple[Fraction, float]]:
        """Atoms ``(location, mass)`` of F, by the family's analytic rule."""
        raise NotImplementedError

    def atom_at(self, x: Fraction) -> float:
        return sum(m for s, m in self.atoms() if s == x)

    def validate(self) -> "Model":
        raise NotImplementedError


class Cylinder:
    """A node ``x_1 ... x_n`` of the digit tree carrying its mass ``p(x_1..x_n)``."""

    depth: int
    mass: float

    def masses(self) -> list[float]:
        raise NotImplementedError

    def child(self, d: int) -> "Cylinder":
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Bernoulli schemes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BernoulliSpec(Model):
    """IID digits with law ``probs[i] = P(X_n = i)``."""

    probs: tuple[Number, ...]
    family = "bernoulli"

    @property
    def q(self) -> int:
        return len(self.probs)

    @cached_property
    def pi(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.probs)

    @property
    def cantor_gamma(self) -> float:
        return self.pi[0] / (1.0 - self.pi[0])

    @property
    def riesz_nagy_alpha(self) -> float:
        if self.q != 2:
            raise ValueError("Riesz-Nagy parameter is defined for base 2")
        return self.pi[1] / (1.0 - self.pi[1])

    @classmethod
    def riesz_nagy(cls, pi) -> "BernoulliSpec":
        """Base-2 scheme with ``P(X_n = 1) = pi``."""
        pi = num(pi)
        return cls((1 - pi, pi))

    def validate(self) -> "BernoulliSpec":
        if self.q < 2:
            raise ValidationError("base must be at least 2")
        return replace(self, probs=_normalise(self.probs, "Bernoulli law"))

    def cylinder(self) -> "Cylinder":
        return _BernoulliCyl(self.pi, 0, 1.0)

    def atoms(self):
        q = self.q
        return [(Fraction(i, q - 1), 1.0) for i, p in enumerate(self.pi) if p == 1.0]


@dataclass(frozen=True)
class _BernoulliCyl(Cylinder):
    pi: tuple[float, ...]
    depth: int
    mass: float

    def masses(self):
        m = self.mass
        return [m * p for p in self.pi]

    def child(self, d):
        return _BernoulliCyl(self.pi, self.depth + 1, self.mass * self.pi[d])


# ---------------------------------------------------------------------------
# Markov chains of order m - 1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkovSpec(Model):
    """Stationary chain of order ``m - 1`` on ``{0..q-1}``.

    ``initial`` is the law of ``(X_1..X_{m-1})`` flattened row-major (first
    digit most significant); ``transitions[ctx][k]`` is the probability of
    next digit ``k`` after context ``ctx``.  For ``m = 1`` the single row is
    the marginal law and ``initial == (1,)``.
    """

    q: int
    m: int
    initial: tuple[Number, ...]
    transitions: tuple[tuple[Number, ...], ...]
    family = "markov"

    def __post_init__(self):
        if self.m < 1:
            raise ValidationError("order parameter m must be >= 1")
        contexts = self.q ** (self.m - 1)
        if len(self.initial) != contexts:
            raise ValidationError(f"initial law needs {contexts} entries, got {len(self.initial)}")
        if len(self.transitions) != contexts or any(len(r) != self.q for r in self.transitions):
            raise ValidationError(f"transition table must be {contexts} x {self.q}")

    @classmethod
    def ising(cls, pi) -> "MarkovSpec":
        pi = num(pi)
        half = Fraction(1, 2) if isinstance(pi, Fraction) else 0.5
        return cls(2, 2, (half, half), ((1 - pi, pi), (pi, 1 - pi)))

    @classmethod
    def two_state(cls, p0, p1) -> "MarkovSpec":
        """Binary order-1 chain with switch probabilities ``p1`` (0 -> 1) and ``p0`` (1 -> 0)."""
        p0, p1 = num(p0), num(p1)
        s = p0 + p1
        return cls(2, 2, (p0 / s, p1 / s), ((1 - p1, p1), (p0, 1 - p0)))

    @classmethod
    def iid(cls, probs) -> "MarkovSpec":
        probs = tuple(num(p) for p in probs)
        return cls(len(probs), 1, (Fraction(1),), (probs,))

    @property
    def context_length(self) -> int:
        return self.m - 1

    @property
    def ising_beta(self) -> float:
        pi = float(self.transitions[0][1])
        return pi / (1.0 - pi)

    @cached_property
    def _init(self) -> np.ndarray:
        return np.array([float(v) for v in self.initial])

    @cached_property
    def _trans(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(float(v) for v in row) for row in self.transitions)

    @cached_property
    def marginals(self) -> tuple[tuple[float, ...], ...]:
        """``marginals[l][idx]`` = ``P(X_1..X_l = digits of idx)`` for ``l <= m - 1``."""
        q, c = self.q, self.context_length
        out = [None] * (c + 1)
        cur = self._init
        out[c] = tuple(float(v) for v in cur)
        for l in range(c - 1, -1, -1):
            cur = cur.reshape(q**l, q).sum(axis=1)
            out[l] = tuple(float(v) for v in cur)
        return tuple(out)

    def invariance_residual(self) -> tuple[float, Optional[int]]:
        """Max residual of the invariance equation and the worst context."""
        q, c = self.q, self.context_length
        if c == 0:
            return 0.0, None
        exact = _all_exact(self.initial) and all(_all_exact(r) for r in self.transitions)
        init = list(self.initial) if exact else [float(v) for v in self.initial]
        rows = self.transitions if exact else self._trans
        shift = q ** (c - 1)
        worst, where = 0, None
        for ctx in range(q**c):
            # ctx = (x_2..x_m); sum over the dropped first digit j
            tail, k = divmod(ctx, q)   # tail = (x_2..x_{m-1}), k = x_m
            lhs = sum(init[j * shift + tail] * rows[j * shift + tail][k] for j in range(q))
            r = abs(lhs - init[ctx])
            if r > worst:
                worst, where = r, ctx
        return float(worst), where

    def validate(self) -> "MarkovSpec":
        rows = tuple(_normalise(r, f"transition row {i}") for i, r in enumerate(self.transitions))
        init = _normalise(self.initial, "initial law")
        spec = replace(self, initial=init, transitions=rows)
        resid, where = spec.invariance_residual()
        if resid > INVARIANCE_TOL:
            raise NotInvariant(
                f"initial law is not invariant (max residual {resid:.3g} at context {where})",
                resid, where)
        return spec

    def cylinder(self) -> "Cylinder":
        return _MarkovCyl(self, 0, 0, 1.0)

    def atoms(self):
        return [a for orbit in self.atom_orbits() for a in orbit]

    def atom_orbits(self) -> list[list[tuple[Fraction, float]]]:
        """Atoms grouped by deterministic cycle of contexts."""
        q, c = self.q, self.context_length
        nctx = q**c
        succ: dict[int, tuple[int, int]] = {}
        for ctx, row in enumerate(self._trans):
            for k, p in enumerate(row):
                if p == 1.0:
                    succ[ctx] = ((ctx * q + k) % nctx, k)
        state = {}
        out = []
        for start in succ:
            path = []
            node = start
            while node in succ and node not in state:
                state[node] = start
                path.append(node)
                node = succ[node][0]
            if node in succ and state.get(node) == start and node in path:
                cycle = path[path.index(node):]
                orbit = self._cycle_atoms(cycle, succ)
                if orbit:
                    out.append(orbit)
        return out

    def _cycle_atoms(self, cycle, succ):
        q, c = self.q, self.context_length
        L = len(cycle)
        ctx_digits = []
        n = cycle[0]
        for _ in range(c):
            n, d = divmod(n, q)
            ctx_digits.append(d)
        seq = list(reversed(ctx_digits)) + [succ[ctx][1] for ctx in cycle]
        block = seq[:L]
        atoms = []
        for j, ctx in enumerate(cycle):
            rot = block[j:] + block[:j]
            b = 0
            for d in rot:
                b = b * q + d
            mass = self.marginals[c][ctx] if c else 1.0
            if mass > 0:
                atoms.append((Fraction(b, q**L - 1), mass))
        return atoms


@dataclass(frozen=True)
class _MarkovCyl(Cylinder):
    spec: MarkovSpec
    depth: int
    ctx: int
    mass: float

    def masses(self):
        s = self.spec
        c = s.context_length
        if self.depth < c:
            marg = s.marginals[self.depth + 1]
            base = self.ctx * s.q
            return [marg[base + k] for k in range(s.q)]
        m = self.mass
        return [m * p for p in s._trans[self.ctx]]

    def child(self, d):
        s = self.spec
        c = s.context_length
        nctx = s.q**c
        if self.depth < c:
            ctx = self.ctx * s.q + d
            return _MarkovCyl(s, self.depth + 1, ctx, s.marginals[self.depth + 1][ctx])
        return _MarkovCyl(s, self.depth + 1, (self.ctx * s.q + d) % nctx,
                          self.mass * s._trans[self.ctx][d])


# ---------------------------------------------------------------------------
# Stationary delayed renewal processes (base 2)
# ---------------------------------------------------------------------------


def nb2_pmf(n, pi):
    """``P(Z_1 = n) = n (1-pi)^2 pi^(n-1)`` (``Z_1 - 1`` negative binomial(2, pi))."""
    n = np.asarray(n, dtype=float)
    return n * (1.0 - pi) ** 2 * np.power(pi, n - 1.0)


def nb2_survival(n, pi):
    """``P(Z_1 > n)``."""
    n = np.asarray(n, dtype=float)
    return (1.0 - pi) * (n + 1.0) * np.power(pi, n) + np.power(pi, n + 1.0)


def nb2_delay_pmf(n, pi):
    """``P(Z_0 = n) = P(Z_1 >= n) / mu``."""
    n = np.asarray(n, dtype=float)
    return ((1.0 - pi) ** 2 / (1.0 + pi) * n * np.power(pi, n - 1.0)
            + (1.0 - pi) / (1.0 + pi) * np.power(pi, n))


def nb2_delay_survival(n, pi):
    """``P(Z_0 > n)``."""
    n = np.asarray(n, dtype=float)
    return ((1.0 - pi) / (1.0 + pi) * (n + 1.0) * np.power(pi, n)
            + 2.0 * np.power(pi, n + 1.0) / (1.0 + pi))


@dataclass(frozen=True)
class RenewalSpec(Model):
    """Binary digits ``X_n = 1`` exactly at renewal epochs ``Z_0, Z_0+Z_1, ...``.

    ``kind`` is one of ``"table"``, ``"degenerate"``, ``"geometric"``,
    ``"nb2"``.  Table laws list ``P(Z_1 = 1..N)`` and put the remaining mass
    on a geometric tail ``P(Z_1 = n) = T (1-r) r^(n-N-1)`` for ``n > N``.
    Degenerate and geometric laws are stored as tables; ``nb2`` keeps its
    closed forms.
    """

    kind: str
    pmf_table: tuple[Number, ...] = ()
    tail_ratio: Number = Fraction(0)
    pi: Optional[Number] = None
    family = "renewal"

    q = 2

    @classmethod
    def degenerate(cls, k: int) -> "RenewalSpec":
        if k < 1:
            raise ValidationError("degenerate interarrival needs k >= 1")
        return cls("degenerate", tuple(Fraction(int(i == k)) for i in range(1, k + 1)))

    @classmethod
    def geometric(cls, p) -> "RenewalSpec":
        """``P(Z_1 = n) = p (1-p)^(n-1)``; mean ``1/p``."""
        return cls("geometric", (), 1 - num(p))

    @classmethod
    def nb2(cls, pi) -> "RenewalSpec":
        return cls("nb2", pi=num(pi))

    @classmethod
    def table(cls, pmf, tail_ratio=0) -> "RenewalSpec":
        return cls("table", tuple(num(v) for v in pmf), num(tail_ratio))

    # -- interarrival law -----------------------------------------------------

    @cached_property
    def _tab(self):
        p = [float(v) for v in self.pmf_table]
        N = len(p)
        tail = 1.0 - math.fsum(p)
        if abs(tail) < 1e-15:
            tail = 0.0
        surv = [0.0] * (N + 1)
        surv[N] = tail
        for i in range(N - 1, -1, -1):
            surv[i] = surv[i + 1] + p[i]
        r = float(self.tail_ratio)
        tail_sum = tail / (1.0 - r) if tail > 0 else 0.0
        # cum[i] = sum_{j >= i} P(Z_1 > j)
        cum = [0.0] * (N + 1)
        cum[N] = tail_sum
        for i in range(N - 1, -1, -1):
            cum[i] = cum[i + 1] + surv[i]
        return np.array(p), np.array(surv), np.array(cum), tail, r, N

    @property
    def tail_mass(self) -> float:
        return self._tab[3]

    def pmf(self, n):
        """``P(Z_1 = n)``; accepts ints or integer arrays."""
        if self.kind == "nb2":
            return nb2_pmf(n, float(self.pi))
        p, _, _, tail, r, N = self._tab
        n = np.asarray(n)
        inside = np.where((n >= 1) & (n <= N), p[np.clip(n - 1, 0, max(N - 1, 0))] if N else 0.0, 0.0)
        outside = np.where(n > N, tail * (1.0 - r) * np.power(r, np.maximum(n - N - 1, 0)), 0.0)
        return inside + outside

    def survival(self, n):
        """``P(Z_1 > n)`` for ``n >= 0``."""
        if self.kind == "nb2":
            return nb2_survival(n, float(self.pi))
        _, surv, _, tail, r, N = self._tab
        n = np.asarray(n)
        return np.where(n < N, surv[np.clip(n, 0, N)], tail * np.power(r, np.maximum(n - N, 0)))

    @cached_property
    def mean(self) -> float:
        if self.kind == "nb2":
            pi = float(self.pi)
            return (1.0 + pi) / (1.0 - pi)
        return float(self._tab[2][0])

    def delay_pmf(self, n):
        """``P(Z_0 = n) = P(Z_1 >= n) / mu`` for ``n >= 1``."""
        if self.kind == "nb2":
            return nb2_delay_pmf(n, float(self.pi))
        n = np.asarray(n)
        return self.survival(n - 1) / self.mean

    def delay_survival(self, n):
        """``P(Z_0 > n) = sum_{i >= n} P(Z_1 > i) / mu``."""
        if self.kind == "nb2":
            return nb2_delay_survival(n, float(self.pi))
        _, _, cum, tail, r, N = self._tab
        n = np.asarray(n)
        far = np.where(tail > 0, tail * np.power(r, np.maximum(n - N, 0)) / (1.0 - r), 0.0)
        return np.where(n < N, cum[np.clip(n, 0, N)], far) / self.mean

    @property
    def unbounded_support(self) -> bool:
        if self.kind == "nb2":
            return True
        return self.tail_mass > 0 and float(self.tail_ratio) > 0

    def degenerate_k(self) -> Optional[int]:
        """``k`` if ``P(Z_1 = k) = 1``."""
        if self.kind == "nb2":
            return None
        n = np.arange(1, len(self.pmf_table) + 2)
        hit = np.flatnonzero(self.pmf(n) == 1.0)
        return int(n[hit[0]]) if hit.size else None

    def is_geometric_mean_two(self, tol: float = 1e-12) -> bool:
        if self.kind == "nb2":
            return False
        n = np.arange(0, len(self.pmf_table) + 64)
        return bool(np.all(np.abs(self.survival(n) - 0.5**n) <= tol))

    def validate(self) -> "RenewalSpec":
        if self.kind not in ("table", "degenerate", "geometric", "nb2"):
            raise ValidationError(f"unknown renewal kind {self.kind!r}")
        if self.kind == "nb2":
            if not 0 < self.pi < 1:
                raise BadShape(f"nb2 parameter must lie in (0, 1), got {self.pi}")
            return self
        if any(v < 0 for v in self.pmf_table):
            raise NonStochasticRow("interarrival pmf has a negative entry")
        total = sum(self.pmf_table)
        if total > 1 + SUM_TOL:
            raise NonStochasticRow(f"interarrival pmf sums to {float(total)} > 1")
        tail = 1 - total
        if tail > SUM_TOL and not 0 <= self.tail_ratio < 1:
            raise InfiniteMean(f"geometric tail ratio {self.tail_ratio} gives no finite mean")
        if tail <= SUM_TOL and total == 0:
            raise NonStochasticRow("empty interarrival law")
        spec = self
        if 0 < abs(tail) <= SUM_TOL:
            spec = replace(self, pmf_table=tuple(v / total for v in self.pmf_table))
        if not math.isfinite(spec.mean):
            raise InfiniteMean("interarrival mean is infinite")
        n = np.arange(1, 4096)
        check = math.fsum(spec.delay_pmf(n)) + float(spec.delay_survival(4095))
        if abs(check - 1.0) > 1e-10:
            raise ValidationError(f"delay law sums to {check}, not 1")
        return spec

    def cylinder(self) -> "Cylinder":
        return _RenewalCyl(self, 0, False, 1.0, 0, 1.0)

    def atoms(self):
        k = self.degenerate_k()
        if k is None:
            return []
        return [(Fraction(2 ** (k - l), 2**k - 1), 1.0 / k) for l in range(1, k + 1)]


@dataclass(frozen=True)
class _RenewalCyl(Cylinder):
    spec: RenewalSpec
    depth: int
    started: bool
    weight: float       # P(Z_0 = z_0) prod P(Z_l = z_l) over points so far
    gap: int            # steps since the last point
    mass: float

    def masses(self):
        s = self.spec
        if not self.started:
            n = self.depth + 1
            return [float(s.delay_survival(n)), float(s.delay_pmf(n))]
        g = self.gap + 1
        return [self.weight * float(s.survival(g)), self.weight * float(s.pmf(g))]

    def child(self, d):
        m0, m1 = self.masses()
        if d == 1:
            return _RenewalCyl(self.spec, self.depth + 1, True, m1, 0, m1)
        return _RenewalCyl(self.spec, self.depth + 1, self.started, self.weight, self.gap + 1, m0)


def renewal_prefix_prob(spec, digits: Sequence[int], pi=None) -> float:
    """Closed form: ``P(Z_{m+1} > n - t_m) prod_l P(Z_l = z_l)``; ``P(Z_0 > n)`` without points."""
    n = len(digits)
    pts = [i + 1 for i, d in enumerate(digits) if d == 1]
    if pi is None:
        dpmf, pmf, surv, dsurv = spec.delay_pmf, spec.pmf, spec.survival, spec.delay_survival
    else:
        dpmf = lambda k: nb2_delay_pmf(k, pi)
        pmf = lambda k: nb2_pmf(k, pi)
        surv = lambda k: nb2_survival(k, pi)
        dsurv = lambda k: nb2_delay_survival(k, pi)
    if not pts:
        return dsurv(n)
    out = dpmf(pts[0])
    for a, b in zip(pts, pts[1:]):
        out = out * pmf(b - a)
    return out * surv(n - pts[-1])


# ---------------------------------------------------------------------------
# Mixtures
# ---------------------------------------------------------------------------

MIXTURE_KINDS = ("dirichlet-bernoulli", "beta-ising", "beta-renewal-nb2", "discrete-mixture")


@dataclass(frozen=True)
class MixtureSpec(Model):
    """A random parameter ``Pi`` drawn once, then a stationary conditional model.

    ``dirichlet-bernoulli``: IID digits with law ``Pi ~ Dirichlet(shapes)``.
    ``beta-ising``: Ising chain with switch probability ``Pi ~ Beta(b0, b1)``.
    ``beta-renewal-nb2``: nb2 renewal with ``Pi ~ Beta(b0, b1)``.
    ``discrete-mixture``: ``components`` is a tuple of ``(weight, model)``.
    """

    kind: str
    shapes: tuple[float, ...] = ()
    components: tuple = ()
    family = "mixture"

    @property
    def q(self) -> int:
        if self.kind == "dirichlet-bernoulli":
            return len(self.shapes)
        if self.kind == "discrete-mixture":
            return self.components[0][1].q
        return 2

    @classmethod
    def discrete(cls, components) -> "MixtureSpec":
        return cls("discrete-mixture", (), tuple((num(w), m) for w, m in components))

    @cached_property
    def _weights(self) -> tuple[float, ...]:
        return tuple(float(w) for w, _ in self.components)

    @cached_property
    def _nodes(self):
        b0, b1 = self.shapes
        return beta_expectation_nodes(b0, b1, GAUSS_JACOBI_NODES)

    def validate(self) -> "MixtureSpec":
        if self.kind not in MIXTURE_KINDS:
            raise ValidationError(f"unknown mixture kind {self.kind!r}")
        if self.kind == "discrete-mixture":
            if not self.components:
                raise ValidationError("discrete mixture needs components")
            weights = _normalise([w for w, _ in self.components], "mixture weights")
            models = [m.validate() for _, m in self.components]
            if len({m.q for m in models}) != 1:
                raise ValidationError("mixture components must share the base")
            return replace(self, components=tuple(zip(weights, models)))
        shapes = tuple(float(s) for s in self.shapes)
        if any(not (s > 0 and math.isfinite(s)) for s in shapes):
            raise BadShape(f"mixing shapes must be positive, got {shapes}")
        need = None if self.kind == "dirichlet-bernoulli" else 2
        if (need and len(shapes) != need) or len(shapes) < 2:
            raise BadShape(f"{self.kind} needs {need or 'at least 2'} shape parameters")
        return replace(self, shapes=shapes)

    def cylinder(self) -> "Cylinder":
        if self.kind == "dirichlet-bernoulli":
            return _DirichletCyl(self.shapes, 0, (0,) * len(self.shapes), 1.0)
        if self.kind == "beta-ising":
            return _BetaIsingCyl(self.shapes[0], self.shapes[1], 0, -1, 0, 1.0)
        if self.kind == "beta-renewal-nb2":
            nodes, w = self._nodes
            k = len(nodes)
            return _NodeRenewalCyl(nodes, w, 0, False, np.ones(k), 0, 1.0)
        cyls = tuple(m.cylinder() for _, m in self.components)
        return _DiscreteCyl(self._weights, cyls, 0, 1.0)

    def atoms(self):
        if self.kind != "discrete-mixture":
            return []
        merged: dict[Fraction, float] = {}
        for w, (_, m) in zip(self._weights, self.components):
            for s, a in m.atoms():
                merged[s] = merged.get(s, 0.0) + w * a
        return sorted((s, a) for s, a in merged.items() if a > 0)


@dataclass(frozen=True)
class _DirichletCyl(Cylinder):
    shapes: tuple[float, ...]
    depth: int
    counts: tuple[int, ...]
    mass: float

    def masses(self):
        denom = sum(self.shapes) + self.depth
        m = self.mass
        return [m * (b + c) / denom for b, c in zip(self.shapes, self.counts)]

    def child(self, d):
        counts = list(self.counts)
        counts[d] += 1
        return _DirichletCyl(self.shapes, self.depth + 1, tuple(counts), self.masses()[d])


@dataclass(frozen=True)
class _BetaIsingCyl(Cylinder):
    b0: float
    b1: float
    depth: int
    last: int
    switches: int
    mass: float

    def masses(self):
        if self.depth == 0:
            return [0.5, 0.5]
        denom = self.b0 + self.b1 + self.depth - 1
        switch = self.mass * (self.b0 + self.switches) / denom
        stay = self.mass * (self.b1 + self.depth - 1 - self.switches) / denom
        return [stay, switch] if self.last == 0 else [switch, stay]

    def child(self, d):
        s = self.switches + (self.depth > 0 and d != self.last)
        return _BetaIsingCyl(self.b0, self.b1, self.depth + 1, d, s, self.masses()[d])


@dataclass(frozen=True)
class _NodeRenewalCyl(Cylinder):
    """nb2 renewal cylinders evaluated at all quadrature nodes at once."""

    nodes: np.ndarray
    weights: np.ndarray
    depth: int
    started: bool
    weight: np.ndarray
    gap: int
    mass: float

    def _node_masses(self):
        pi = self.nodes
        if not self.started:
            n = self.depth + 1
            return nb2_delay_survival(n, pi), nb2_delay_pmf(n, pi)
        g = self.gap + 1
        return self.weight * nb2_survival(g, pi), self.weight * nb2_pmf(g, pi)

    def masses(self):
        m0, m1 = self._node_masses()
        return [float(self.weights @ m0), float(self.weights @ m1)]

    def child(self, d):
        m0, m1 = self._node_masses()
        if d == 1:
            return _NodeRenewalCyl(self.nodes, self.weights, self.depth + 1, True, m1, 0,
                                   float(self.weights @ m1))
        return _NodeRenewalCyl(self.nodes, self.weights, self.depth + 1, self.started, self.weight,
                               self.gap + 1, float(self.weights @ m0))


@dataclass(frozen=True)
class _DiscreteCyl(Cylinder):
    weights: tuple[float, ...]
    parts: tuple
    depth: int
    mass: float

    def masses(self):
        out = None
        for w, c in zip(self.weights, self.parts):
            ms = c.masses()
            out = [w * v for v in ms] if out is None else [o + w * v for o, v in zip(out, ms)]
        return out

    def child(self, d):
        parts = tuple(c.child(d) for c in self.parts)
        return _DiscreteCyl(self.weights, parts, self.depth + 1,
                            math.fsum(w * c.mass for w, c in zip(self.weights, parts)))


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


ModelSpec = Union[BernoulliSpec, MarkovSpec, RenewalSpec, MixtureSpec]


def validate(spec: Model) -> Model:
    """Check every invariant of ``spec`` and return a normalised copy."""
    return spec.validate()


def finite_dim_prob(model: Model, digits: Sequence[int], cap: int = DIGIT_CAP) -> float:
    """``p(x_1..x_n)`` by the family's closed-form expression."""
    digits = tuple(digits)
    n = len(digits)
    if n > cap:
        raise PrefixTooLong(f"prefix of length {n} exceeds cap {cap}")
    q = model.q
    if any(not 0 <= d < q for d in digits):
        raise ValueError(f"digits must lie in 0..{q - 1}")
    if n == 0:
        return 1.0
    if isinstance(model, BernoulliSpec):
        st = prefix_stats(digits, 1, q)
        return math.prod(p**c for p, c in zip(model.pi, st.counts))
    if isinstance(model, MarkovSpec):
        c = model.context_length
        if n <= c:
            idx = 0
            for d in digits:
                idx = idx * q + d
            return model.marginals[n][idx]
        idx = 0
        for d in digits[:c]:
            idx = idx * q + d
        out = model.marginals[c][idx] if c else 1.0
        st = prefix_stats(digits, c + 1, q)
        for pattern, count in st.patterns.items():
            if count:
                ctx = 0
                for d in pattern[:-1]:
                    ctx = ctx * q + d
                out *= model._trans[ctx][pattern[-1]] ** count
        return out
    if isinstance(model, RenewalSpec):
        return float(renewal_prefix_prob(model, digits))
    if isinstance(model, MixtureSpec):
        if model.kind == "discrete-mixture":
            return math.fsum(w * finite_dim_prob(m, digits, cap)
                             for w, (_, m) in zip(model._weights, model.components))
        if model.kind == "dirichlet-bernoulli":
            st = prefix_stats(digits, 1, q)
            shapes = model.shapes
            post = [b + k for b, k in zip(shapes, st.counts)]
            return math.exp(log_multivariate_beta(post) - log_multivariate_beta(shapes))
        if model.kind == "beta-ising":
            b0, b1 = model.shapes
            s = prefix_stats(digits, 1, 2).switches
            return 0.5 * math.exp(log_beta(b0 + s, b1 + n - 1 - s) - log_beta(b0, b1))
        nodes, w = model._nodes
        return float(w @ renewal_prefix_prob(None, digits, pi=nodes))
    raise TypeError(f"unsupported model {type(model).__name__}")


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _categorical(u: np.ndarray, cum: np.ndarray) -> np.ndarray:
    """Index of the first cumulative entry exceeding ``u`` (row-wise when ``cum`` is 2-D)."""
    if cum.ndim == 1:
        return np.minimum(np.searchsorted(cum, u, side="right"), len(cum) - 1)
    return np.minimum((u[..., None] >= cum).sum(axis=-1), cum.shape[-1] - 1)


def _renewal_paths(size: int, n: int, rng, funcs) -> np.ndarray:
    dpmf, dsurv, pmf, surv = funcs
    out = np.zeros((size, n), dtype=np.int8)
    started = np.zeros(size, dtype=bool)
    gap = np.zeros(size, dtype=np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        for t in range(1, n + 1):
            g = gap + 1
            num_ = np.where(started, pmf(g), dpmf(t))
            den = np.where(started, surv(g - 1), dsurv(t - 1))
            h = np.where(den > 0, num_ / np.where(den > 0, den, 1.0), 1.0)
            hit = rng.random(size) < h
            out[:, t - 1] = hit
            started |= hit
            gap = np.where(hit, 0, gap + 1)
    return out


def sample_paths(model: Model, size: int, n: int, seed=None) -> np.ndarray:
    """``size`` independent digit prefixes of length ``n`` (array of shape ``(size, n)``)."""
    rng = _rng(seed)
    q = model.q
    if isinstance(model, BernoulliSpec):
        cum = np.cumsum(model.pi)
        return _categorical(rng.random((size, n)), cum).astype(np.int8)
    if isinstance(model, MarkovSpec):
        c = model.context_length
        nctx = q**c
        out = np.zeros((size, n), dtype=np.int8)
        init_cum = np.cumsum(model.marginals[c]) if c else np.array([1.0])
        ctx = _categorical(rng.random(size), init_cum)
        digits = []
        rem = ctx.copy()
        for _ in range(c):
            rem, d = np.divmod(rem, q)
            digits.append(d)
        for i, d in enumerate(reversed(digits[:])):
            if i < n:
                out[:, i] = d
        cum = np.cumsum(np.array(model._trans), axis=1)
        for t in range(c, n):
            k = _categorical(rng.random(size), cum[ctx])
            out[:, t] = k
            ctx = (ctx * q + k) % nctx
        return out
    if isinstance(model, RenewalSpec):
        funcs = (model.delay_pmf, model.delay_survival, model.pmf, model.survival)
        return _renewal_paths(size, n, rng, funcs)
    if isinstance(model, MixtureSpec):
        if model.kind == "discrete-mixture":
            which = rng.choice(len(model.components), size=size, p=np.array(model._weights))
            out = np.zeros((size, n), dtype=np.int8)
            for i, (_, m) in enumerate(model.components):
                rows = np.flatnonzero(which == i)
                if rows.size:
                    out[rows] = sample_paths(m, rows.size, n, rng)
            return out
        if model.kind == "dirichlet-bernoulli":
            probs = rng.dirichlet(model.shapes, size=size)
            cum = np.cumsum(probs, axis=1)[:, None, :]
            u = rng.random((size, n))
            return np.minimum((u[..., None] >= cum).sum(axis=-1), q - 1).astype(np.int8)
        pi = rng.beta(model.shapes[0], model.shapes[1], size=size)
        if model.kind == "beta-ising":
            out = np.zeros((size, n), dtype=np.int8)
            if n == 0:
                return out
            out[:, 0] = rng.random(size) < 0.5
            for t in range(1, n):
                flip = rng.random(size) < pi
                out[:, t] = np.where(flip, 1 - out[:, t - 1], out[:, t - 1])
            return out
        funcs = (lambda k: nb2_delay_pmf(k, pi), lambda k: nb2_delay_survival(k, pi),
                 lambda k: nb2_pmf(k, pi), lambda k: nb2_survival(k, pi))
        return _renewal_paths(size, n, rng, funcs)
    raise TypeError(f"unsupported model {type(model).__name__}")


def sample_digits(model: Model, n: int, seed=None, cap: int = DIGIT_CAP) -> tuple[int, ...]:
    """One digit path ``X_1..X_n`` of the model."""
    if n > cap:
        raise PrefixTooLong(f"requested {n} digits, cap is {cap}")
    return tuple(int(d) for d in sample_paths(model, 1, n, seed)[0])


def sample_values(model: Model, size: int, depth: int = 64, seed=None) -> np.ndarray:
    """Samples of ``X`` truncated to ``depth`` digits."""
    paths = sample_paths(model, size, depth, seed).astype(float)
    scale = float(model.q) ** -np.arange(1, depth + 1)
    return paths @ scale
