"""Log-beta and related special functions used by the beta/Dirichlet families."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Chebyshev coefficients of the Stirling remainder (SLATEC d9lgmc / R lgammacor)
_ALGMCS = (
    +0.1666389480451863247205729650822e+0,
    -0.1384948176067563840732986059135e-4,
    +0.9810825646924729426157171547487e-8,
    -0.1809129475572494194263306266719e-10,
    +0.6221098041892605227126015543416e-13,
    -0.3399615005417721944303330599666e-15,
    +0.2683181998482698748957538846666e-17,
)
_XBIG = 94906265.62425156


def _chebyshev(x: float, coeffs: Sequence[float]) -> float:
    twox = 2.0 * x
    b0 = b1 = b2 = 0.0
    for c in reversed(coeffs):
        b2 = b1
        b1 = b0
        b0 = twox * b1 - b2 + c
    return 0.5 * (b0 - b2)


def lgamma_correction(x: float) -> float:
    """``lgamma(x) - ((x - 1/2) log x - x + log sqrt(2 pi))`` for ``x >= 10``."""
    if x < 10:
        raise DomainError("correction term is tabulated for x >= 10 only")
    if x >= _XBIG:
        return 1.0 / (12.0 * x)
    t = 10.0 / x
    return _chebyshev(2.0 * t * t - 1.0, _ALGMCS) / x


def log_beta(a: float, b: float) -> float:
    """``log B(a, b)`` without cancellation for large or unbalanced arguments."""
    if not (a > 0 and b > 0):
        raise DomainError(f"log_beta needs positive arguments, got ({a}, {b})")
    p, q = min(a, b), max(a, b)
    if p >= 10:
        corr = lgamma_correction(p) + lgamma_correction(q) - lgamma_correction(p + q)
        return (-0.5 * math.log(q) + _LN_SQRT_2PI + corr
                + (p - 0.5) * math.log(p / (p + q)) + q * math.log1p(-p / (p + q)))
    if q >= 10:
        corr = lgamma_correction(q) - lgamma_correction(p + q)
        return (math.lgamma(p) + corr + p - p * math.log(p + q)
                + (q - 0.5) * math.log1p(-p / (p + q)))
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q)


def log_multivariate_beta(shapes: Sequence[float]) -> float:
    """``log(prod Gamma(b_i) / Gamma(sum b_i))``, built from pairwise log-betas."""
    if any(not s > 0 for s in shapes):
        raise DomainError("Dirichlet shapes must be positive")
    total = float(shapes[0])
    out = 0.0
    for s in shapes[1:]:
        out += log_beta(total, float(s))
        total += float(s)
    return out


def beta_expectation_nodes(b0: float, b1: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi nodes and normalised weights for ``E g(P)``, ``P ~ Beta(b0, b1)``.

    Golub-Welsch on the Jacobi matrix of ``(1-t)^a (1+t)^b``, ``P = (1+t)/2``.
    The rule integrates ``g`` exactly when it is a polynomial of degree < 2n.
    """
    a, b = float(b1) - 1.0, float(b0) - 1.0
    diag = np.empty(n)
    diag[0] = (b - a) / (a + b + 2.0)
    k = np.arange(1, n, dtype=float)
    s = 2.0 * k + a + b
    diag[1:] = (b * b - a * a) / (s * (s + 2.0))
    off = np.empty(n - 1)
    if n > 1:
        # k = 1 in closed form: the general expression is 0/0 when a + b = -1
        off[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
        k, s = k[1:], s[1:]
        off[1:] = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0))
    t, v = eigh_tridiagonal(diag, np.sqrt(off))
    w = v[0] ** 2
    return (1.0 + t) / 2.0, w / w.sum()
