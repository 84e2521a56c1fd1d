"""Mixture CDFs ``F = E F_Pi`` for beta and Dirichlet mixing laws.

The Bernoulli and Ising mixtures have explicit series whose terms are ratios
of (multivariate) beta functions, computed in log space.  The nb2 renewal
mixture has no usable closed form, so it is integrated numerically against
the beta density with an adaptive Gauss-Kronrod rule.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import integrate

from .cdf import DEFAULT_TOL, MAX_DEPTH, CdfValue
from .closed_forms import _ray, nb2_renewal_cdf
from .digits import as_fraction
from .errors import BadShape, NoConvergence, QuadratureFailure
from .models import MixtureSpec
from .special import log_beta, log_multivariate_beta

__all__ = ["log_beta", "log_multivariate_beta", "BetaKernel", "mixed_bernoulli_cdf",
           "mixed_ising_cdf", "mixed_renewal_cdf"]

QUADRATURE_NODE_BUDGET = 10**4


class BetaKernel:
    """Beta-moment ratios ``B(b0 + i, b1 + j) / B(b0, b1)`` with the normaliser cached."""

    def __init__(self, b0: float, b1: float):
        if not (b0 > 0 and b1 > 0):
            raise BadShape(f"beta shapes must be positive, got ({b0}, {b1})")
        self.b0, self.b1 = float(b0), float(b1)
        self.log_norm = log_beta(self.b0, self.b1)

    def moment(self, i: float, j: float) -> float:
        """``E Pi^i (1 - Pi)^j`` for ``Pi ~ Beta(b0, b1)``."""
        return math.exp(log_beta(self.b0 + i, self.b1 + j) - self.log_norm)


def _shapes_of(spec) -> tuple[float, ...]:
    if isinstance(spec, MixtureSpec):
        if spec.kind != "dirichlet-bernoulli":
            raise ValueError(f"expected a Dirichlet mixture, got {spec.kind}")
        return tuple(float(s) for s in spec.shapes)
    shapes = tuple(float(s) for s in spec)
    if len(shapes) < 2 or any(not s > 0 for s in shapes):
        raise BadShape(f"Dirichlet shapes must be positive, got {shapes}")
    return shapes


def mixed_bernoulli_cdf(spec, x, tol: float = DEFAULT_TOL, max_depth: int = MAX_DEPTH) -> CdfValue:
    """IID digits with law ``Pi ~ Dirichlet(shapes)``.

    Term ``(n, k)`` is ``E prod Pi_i^{n_i(x_1..x_{n-1}, k)}``; in base 2 this is
    ``B(b0 + n - #y_{n-1}, b1 + #y_{n-1}) / B(b0, b1)`` for each point ``n``.
    """
    shapes = _shapes_of(spec)
    q = len(shapes)
    x = as_fraction(x)
    if x == 1:
        return CdfValue(1.0, 0.0, 0.0, 0)
    digits = _ray(x, q)
    finite = isinstance(digits, tuple)
    terms = []
    n = 0
    if q == 2:
        kern = BetaKernel(*shapes)
        ones = 0
        for d in digits:
            if not finite:
                mass = kern.moment(n - ones, ones)
                if mass <= tol:
                    return CdfValue(math.fsum(terms), mass, 0.0, n)
            if n >= max_depth:
                raise NoConvergence(f"no convergence within {max_depth} digits")
            n += 1
            if d:
                terms.append(math.exp(log_beta(shapes[0] + n - ones, shapes[1] + ones)
                                      - kern.log_norm))
            ones += d
        return CdfValue(math.fsum(terms), 0.0, 0.0, n)
    log_norm = log_multivariate_beta(shapes)
    counts = [0] * q

    def moment(c):
        return math.exp(log_multivariate_beta([b + k for b, k in zip(shapes, c)]) - log_norm)

    for d in digits:
        if not finite:
            mass = moment(counts)
            if mass <= tol:
                return CdfValue(math.fsum(terms), mass, 0.0, n)
        if n >= max_depth:
            raise NoConvergence(f"no convergence within {max_depth} digits")
        n += 1
        for k in range(d):
            counts[k] += 1
            terms.append(moment(counts))
            counts[k] -= 1
        counts[d] += 1
    return CdfValue(math.fsum(terms), 0.0, 0.0, n)


def mixed_ising_cdf(b0: float, b1: float, x, tol: float = DEFAULT_TOL,
                    max_depth: int = MAX_DEPTH) -> CdfValue:
    """Ising chains with switch probability ``Pi ~ Beta(b0, b1)``.

    ``F(x) = 1/2 sum_{n in y} B(b0 + s_n, b1 + n - 1 - s_n) / B(b0, b1)`` where
    ``s_n`` counts the switches of ``(x_1, .., x_{n-1}, 0)``.
    """
    kern = BetaKernel(b0, b1)
    x = as_fraction(x)
    if x == 1:
        return CdfValue(1.0, 0.0, 0.0, 0)
    digits = _ray(x, 2)
    finite = isinstance(digits, tuple)
    terms = []
    n, sw, last = 0, 0, None
    for d in digits:
        if not finite and n > 0:
            mass = 0.5 * kern.moment(sw, n - 1 - sw)
            if mass <= tol:
                return CdfValue(math.fsum(terms), mass, 0.0, n)
        if n >= max_depth:
            raise NoConvergence(f"no convergence within {max_depth} digits")
        if d:
            s = sw + (last == 1)
            terms.append(0.5 * kern.moment(s, n - s))
        sw += n > 0 and d != last
        last = d
        n += 1
    return CdfValue(math.fsum(terms), 0.0, 0.0, n)


def mixed_renewal_cdf(b0: float, b1: float, x, tol: float = DEFAULT_TOL,
                      node_budget: int = QUADRATURE_NODE_BUDGET) -> CdfValue:
    """nb2 renewal processes with ``Pi ~ Beta(b0, b1)``, by adaptive quadrature.

    The integral is split at 1/2.  Near an endpoint whose shape is below 1 the
    substitution ``pi = t^(1/b0)`` (or its mirror) removes the density's
    singularity.  The reported bound is the quadrature error estimate plus the
    beta-average of the inner truncation bounds.
    """
    kern = BetaKernel(b0, b1)
    b0, b1 = kern.b0, kern.b1
    x = as_fraction(x)
    if x == 0:
        return CdfValue(0.0, 0.0, 0.0, 0)
    if x == 1:
        return CdfValue(1.0, 0.0, 0.0, 0)
    inner_tol = tol

    def inner(pi):
        v, b = nb2_renewal_cdf(np.array([pi]), x, inner_tol)
        return np.array([v[0], b[0]])

    log_norm = kern.log_norm
    pieces = []
    if b0 < 1:
        # pi = t^(1/b0) on [0, 1/2]
        def f_lo(t):
            pi = t ** (1.0 / b0)
            w = math.exp((b1 - 1.0) * math.log1p(-pi) - log_norm) / b0
            return w * inner(pi)
        pieces.append((f_lo, 0.0, 0.5**b0))
    else:
        def f_lo(pi):
            w = math.exp((b0 - 1.0) * math.log(pi) + (b1 - 1.0) * math.log1p(-pi) - log_norm)
            return w * inner(pi)
        pieces.append((f_lo, 0.0, 0.5))
    if b1 < 1:
        # 1 - pi = s^(1/b1) on [1/2, 1]
        def f_hi(s):
            r = s ** (1.0 / b1)
            w = math.exp((b0 - 1.0) * math.log1p(-r) - log_norm) / b1
            return w * inner(1.0 - r)
        pieces.append((f_hi, 0.0, 0.5**b1))
    else:
        def f_hi(pi):
            w = math.exp((b0 - 1.0) * math.log(pi) + (b1 - 1.0) * math.log1p(-pi) - log_norm)
            return w * inner(pi)
        pieces.append((f_hi, 0.5, 1.0))
    value, err, bound = 0.0, 0.0, 0.0
    limit = max(1, node_budget // 15)
    for f, a, b in pieces:
        res, e, info = integrate.quad_vec(f, a, b, epsabs=tol, epsrel=0.0, norm="max",
                                          quadrature="gk15", limit=limit, full_output=True)
        if info.status == 2 or not np.all(np.isfinite(res)):
            raise QuadratureFailure(f"non-finite integrand for x={x}")
        if info.status == 1 and e > max(tol, 1e-10):
            raise QuadratureFailure(f"quadrature error {e:.3g} above tolerance at node budget")
        value += res[0]
        bound += res[1]
        err += e
    value = min(max(value - err, 0.0), 1.0)
    return CdfValue(value, 2.0 * err + bound, 0.0, 0)
