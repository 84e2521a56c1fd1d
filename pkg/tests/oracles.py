"""Brute-force reference computations, coded independently of the library internals.

Every oracle returns the full tensor of cylinder probabilities of depth d,
flattened so that index k is the cylinder [k/q^d, (k+1)/q^d).
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from singcdf import BernoulliSpec, MarkovSpec, MixtureSpec, RenewalSpec


def digits_table(q: int, d: int) -> np.ndarray:
    """Row k holds the d base-q digits of k (most significant first)."""
    k = np.arange(q**d)
    out = np.empty((q**d, d), dtype=np.int64)
    for i in range(d - 1, -1, -1):
        k, out[:, i] = np.divmod(k, q)
    return out


def bernoulli_tensor(probs, d: int) -> np.ndarray:
    p = np.array([float(v) for v in probs])
    t = np.array(1.0)
    for _ in range(d):
        t = np.multiply.outer(t, p)
    return t.reshape(-1)


def markov_tensor(spec: MarkovSpec, d: int) -> np.ndarray:
    q, c = spec.q, spec.m - 1
    init = np.array([float(v) for v in spec.initial]).reshape((q,) * c)
    if d <= c:
        return init.reshape((q,) * d + (-1,)).sum(axis=-1).reshape(-1) if d < c else init.reshape(-1)
    T = np.array([[float(v) for v in row] for row in spec.transitions]).reshape((q,) * (c + 1))
    t = init
    for _ in range(d - c):
        # the new digit's law depends on the last c digits
        t = t[..., None] * T
    return t.reshape(-1)


def age_chain_tensor(pmf, survival, mean: float, d: int, max_age: int = 600) -> np.ndarray:
    """Renewal indicators through the stationary age chain: P(A=a) = S(a)/mu, hazard pmf(a+1)/S(a)."""
    ages = np.arange(max_age + d + 2)
    S = np.array([float(survival(int(a))) for a in ages])
    f = np.array([float(pmf(int(a) + 1)) for a in ages])
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(S > 0, f / np.where(S > 0, S, 1.0), 0.0)
    w = np.zeros((1, len(ages)))
    w[0, : max_age + 1] = S[: max_age + 1] / mean
    for _ in range(d):
        hit = (w * h).sum(axis=1)
        stay = np.zeros_like(w)
        stay[:, 1:] = (w * (1.0 - h))[:, :-1]
        new1 = np.zeros_like(w)
        new1[:, 0] = hit
        # digit 0 then digit 1, interleaved so the digit is the least significant index
        w = np.stack([stay, new1], axis=1).reshape(-1, len(ages))
    return w.sum(axis=1)


def renewal_tensor(spec: RenewalSpec, d: int) -> np.ndarray:
    return age_chain_tensor(spec.pmf, spec.survival, spec.mean, d)


def nb2_cylinders(pi: np.ndarray, digits: np.ndarray, rest=None) -> np.ndarray:
    """p(x_1..x_n) for nb2 renewal at parameters ``pi`` (rows of ``digits``), straight from the pmfs.

    ``rest`` is ``1 - pi``, passed separately when ``pi`` rounds to 1.
    """
    pi = np.asarray(pi, dtype=float)
    rest = 1 - pi if rest is None else np.asarray(rest, dtype=float)

    def pmf(n):
        return n * rest**2 * pi ** (n - 1)

    def surv(n):
        return rest * (n + 1) * pi**n + pi ** (n + 1)

    def delay_surv(n):
        # sum_{i >= n} S(i) / mu with mu = (1 + pi) / (1 - pi)
        return (pi**n * (n + 1) * rest + 2 * pi ** (n + 1)) / (1 + pi)

    out = np.empty((len(digits), len(pi)))
    n = digits.shape[1]
    for r, row in enumerate(digits):
        pts = np.flatnonzero(row) + 1
        if len(pts) == 0:
            out[r] = delay_surv(n)
            continue
        v = surv(pts[0] - 1) * rest / (1 + pi)
        for a, b in zip(pts, pts[1:]):
            v = v * pmf(b - a)
        out[r] = v * surv(n - pts[-1])
    return out


def tanh_sinh_beta(b0: float, b1: float, h: float = 1 / 64, span: float = 4.0):
    """Nodes and weights for E g(P), P ~ Beta(b0, b1), double-exponential rule."""
    t = np.arange(-span, span + h / 2, h)
    u = np.pi * np.sinh(t)
    x = 1.0 / (1.0 + np.exp(-u))
    y = 1.0 / (1.0 + np.exp(u))    # 1 - x without cancellation
    logB = float(mpmath.log(mpmath.beta(b0, b1)))
    w = h * np.pi * np.cosh(t) * np.exp(b0 * np.log(x) + b1 * np.log(y) - logB)
    return x, y, w


def mixture_tensor(spec: MixtureSpec, d: int) -> np.ndarray:
    q = spec.q
    D = digits_table(q, d)
    if spec.kind == "dirichlet-bernoulli":
        counts = np.stack([(D == i).sum(axis=1) for i in range(q)], axis=1)
        b = [mpmath.mpf(s) for s in spec.shapes]
        cache = {}
        out = np.empty(len(D))
        for r, c in enumerate(map(tuple, counts)):
            if c not in cache:
                num = mpmath.fprod(mpmath.gamma(bi + ci) for bi, ci in zip(b, c)) / mpmath.gamma(sum(b) + sum(c))
                den = mpmath.fprod(mpmath.gamma(bi) for bi in b) / mpmath.gamma(sum(b))
                cache[c] = float(num / den)
            out[r] = cache[c]
        return out
    if spec.kind == "beta-ising":
        b0, b1 = spec.shapes
        sw = (D[:, 1:] != D[:, :-1]).sum(axis=1) if d > 1 else np.zeros(len(D), dtype=int)
        out = np.empty(len(D))
        for r, s in enumerate(sw):
            out[r] = 0.5 * float(mpmath.beta(b0 + s, b1 + d - 1 - s) / mpmath.beta(b0, b1))
        return out
    if spec.kind == "beta-renewal-nb2":
        x, y, w = tanh_sinh_beta(*spec.shapes)
        return nb2_cylinders(x, D, y) @ w
    tensors = [float(wt) * oracle_tensor(m, d) for wt, m in spec.components]
    return np.sum(tensors, axis=0)


def oracle_tensor(model, d: int) -> np.ndarray:
    if isinstance(model, BernoulliSpec):
        return bernoulli_tensor(model.probs, d)
    if isinstance(model, MarkovSpec):
        return markov_tensor(model, d)
    if isinstance(model, RenewalSpec):
        return renewal_tensor(model, d)
    if isinstance(model, MixtureSpec):
        return mixture_tensor(model, d)
    raise TypeError(type(model))


def brute_cdf_below(tensor: np.ndarray, q: int, d: int, x: Fraction) -> tuple[float, float]:
    """``(sum of cylinders entirely below x, mass of the cylinder holding x)``."""
    k = math.floor(x * q**d)
    cum = math.fsum(tensor[:k])
    cell = float(tensor[k]) if k < len(tensor) else 0.0
    return cum, cell


def naive_prefix_stats(digits, j: int, q: int):
    counts = [0] * q
    for dgt in digits:
        counts[dgt] += 1
    pats = {}
    for i in range(len(digits) - j + 1):
        key = tuple(digits[i:i + j])
        pats[key] = pats.get(key, 0) + 1
    switches = 0
    for i in range(len(digits) - 1):
        if digits[i] != digits[i + 1]:
            switches += 1
    return counts, pats, switches
