"""Explicit CDF formulas for the classical one-parameter families.

These are written directly from the digit-sum formulas (not through the
cylinder walkers of :mod:`singcdf.models`) and serve as independent cross
checks of :func:`singcdf.cdf.eval_cdf`.  All of them assume parameters in
the continuous range (no atoms), so at base-q fractions the terminating
expansion gives a finite, exact sum.  Elsewhere the series is truncated once
the cylinder mass drops below ``tol``; that mass is returned as the bound.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .digits import TERMINATING, DigitExpansion, as_fraction
from .errors import NoConvergence

DEFAULT_TOL = 1e-13
MAX_DEPTH = 10**4


def _ray(x, q: int) -> Iterator[int] | tuple[int, ...]:
    """Digits of ``x``: a finite tuple at base-q fractions, an iterator otherwise."""
    e = DigitExpansion.from_rational(as_fraction(x), q, TERMINATING)
    if e.ends_in_zeros():
        n = e.constant_tail_start(0)
        return e.prefix[:n]
    return iter(e)


def _run(x, q, tol, max_depth, term: Callable, advance: Callable, mass: Callable, state):
    """Generic driver: ``term(state, d)`` is the contribution of digit ``d``,
    ``advance(state, d)`` the state after it, ``mass(state)`` the cylinder mass."""
    x = as_fraction(x)
    if x == 1:
        return 1.0, 0.0
    digits = _ray(x, q)
    finite = isinstance(digits, tuple)
    terms = []
    for n, d in enumerate(digits):
        if not finite and mass(state) <= tol:
            return math.fsum(terms), mass(state)
        if n >= max_depth:
            raise NoConvergence(f"no convergence within {max_depth} digits", math.fsum(terms))
        if d:
            terms.append(term(state, d))
        state = advance(state, d)
    return math.fsum(terms), 0.0


def iid_cdf(probs, x, tol=DEFAULT_TOL, max_depth=MAX_DEPTH) -> tuple[float, float]:
    """Bernoulli scheme: sum over ``k < x_n`` of ``prod pi_i^{n_i(x_1..x_{n-1},k)}``."""
    p = [float(v) for v in probs]
    q = len(p)

    def term(st, d):
        counts, _ = st
        base = math.prod(pi**c for pi, c in zip(p, counts))
        return base * sum(p[:d])

    def advance(st, d):
        counts, _ = st
        counts = list(counts)
        counts[d] += 1
        return tuple(counts), None

    def mass(st):
        return math.prod(pi**c for pi, c in zip(p, st[0]))

    return _run(x, q, tol, max_depth, term, advance, mass, ((0,) * q, None))


def riesz_nagy_cdf(pi, x, tol=DEFAULT_TOL, max_depth=MAX_DEPTH) -> tuple[float, float]:
    """``sum_{n in y} alpha^{#y_{n-1}} / (1 + alpha)^n`` with ``alpha = pi / (1 - pi)``."""
    pi = float(pi)
    alpha = pi / (1.0 - pi)
    # state: (n - 1, #points so far)
    return _run(x, 2, tol, max_depth,
                lambda s, d: alpha ** s[1] / (1.0 + alpha) ** (s[0] + 1),
                lambda s, d: (s[0] + 1, s[1] + d),
                lambda s: pi ** s[1] * (1.0 - pi) ** (s[0] - s[1]),
                (0, 0))


def cantor_cdf(pi0, x, tol=DEFAULT_TOL, max_depth=MAX_DEPTH) -> tuple[float, float]:
    """Triadic scheme with ``pi_1 = 0``: the generalised Cantor function.

    Digits up to the first 1 contribute ``gamma^{n_0+1} / (1+gamma)^n`` with
    ``gamma = pi0 / (1 - pi0)``; the first 1 contributes one last term.
    """
    pi0 = float(pi0)
    gamma = pi0 / (1.0 - pi0)
    x = as_fraction(x)
    if x == 1:
        return 1.0, 0.0
    digits = _ray(x, 3)
    finite = isinstance(digits, tuple)
    terms = []
    zeros = 0
    for n, d in enumerate(digits, start=1):
        if not finite and pi0**zeros * (1 - pi0) ** (n - 1 - zeros) <= tol:
            return math.fsum(terms), pi0**zeros * (1 - pi0) ** (n - 1 - zeros)
        if n > max_depth:
            raise NoConvergence(f"no convergence within {max_depth} digits", math.fsum(terms))
        if d >= 1:
            terms.append(gamma ** (zeros + 1) / (1.0 + gamma) ** n)
        if d == 1:
            return math.fsum(terms), 0.0
        zeros += d == 0
    return math.fsum(terms), 0.0


def two_state_cdf(p0, p1, x, tol=DEFAULT_TOL, max_depth=MAX_DEPTH) -> tuple[float, float]:
    """Binary order-1 chain with switch probabilities ``p1`` (0 to 1) and ``p0`` (1 to 0).

    The ``n = 1`` term is ``pi_0`` (probability of a leading 0); later terms
    are ``pi_{x_1} p0^{x_{n-1}} (1-p1)^{1-x_{n-1}} prod pi_{ij}^{n_ij}``.
    """
    p0, p1 = float(p0), float(p1)
    pi = (p0 / (p0 + p1), p1 / (p0 + p1))
    T = ((1 - p1, p1), (p0, 1 - p0))

    # state: (first digit or None, last digit, running product of transitions)
    def term(s, d):
        first, last, prod = s
        if first is None:
            return pi[0]
        return pi[first] * (p0 if last == 1 else 1 - p1) * prod

    def advance(s, d):
        first, last, prod = s
        if first is None:
            return d, d, 1.0
        return first, d, prod * T[last][d]

    def mass(s):
        first, last, prod = s
        return 1.0 if first is None else pi[first] * prod

    return _run(x, 2, tol, max_depth, term, advance, mass, (None, None, 1.0))


def ising_cdf(pi, x, tol=DEFAULT_TOL, max_depth=MAX_DEPTH) -> tuple[float, float]:
    """Ising chain: ``1/2 sum_{n: x_n=1} beta^{s_n} / (1+beta)^{n-1}``.

    ``s_n`` counts the switches of ``(x_1, .., x_{n-1}, 0)``, i.e. including
    the switch into the final 0; without it the terms do not sum to 1 at x=1.
    """
    pi = float(pi)
    beta = pi / (1.0 - pi)

    # state: (n - 1, switches among x_1..x_{n-1}, last digit)
    def term(s, d):
        n1, sw, last = s
        sw += last == 1
        return 0.5 * beta**sw / (1.0 + beta) ** n1

    def advance(s, d):
        n1, sw, last = s
        return n1 + 1, sw + (n1 > 0 and d != last), d

    def mass(s):
        n1, sw, _ = s
        return 1.0 if n1 == 0 else 0.5 * beta**sw / (1.0 + beta) ** (n1 - 1)

    return _run(x, 2, tol, max_depth, term, advance, mass, (0, 0, None))


def nb2_renewal_cdf(pi, x, tol=DEFAULT_TOL, max_depth=MAX_DEPTH):
    """Renewal process with ``P(Z_1 = n) = n (1-pi)^2 pi^(n-1)``; vectorised over ``pi``.

    With points ``z_0, z_0 + z_1, ...`` of the expansion of ``x``:
    ``F = P(Z_0 > z_0) + P(Z_0 = z_0) sum_k [(1-pi)(z_k+1) + pi] (1-pi)^(2k-2)
    pi^(z_1+..+z_k-k+1) prod_{l<k} z_l``.
    Returns ``(value, bound)`` arrays shaped like ``pi``.
    """
    pi = np.asarray(pi, dtype=float)
    x = as_fraction(x)
    if x == 0:
        return np.zeros_like(pi), np.zeros_like(pi)
    if x == 1:
        return np.ones_like(pi), np.zeros_like(pi)
    digits = _ray(x, 2)
    finite = isinstance(digits, tuple)
    if not finite:
        digits = _points_of_periodic(x)
    a = (1.0 - pi) / (1.0 + pi)
    value = None
    lead = None      # P(Z_0 = z_0)
    run = None       # (1-pi)^(2k-2) pi^(z_1..z_{k-1} - (k-1)) prod z_l, before the pi^{z_k} factor
    last = 0
    bound = np.zeros_like(pi)
    for n, d in enumerate(digits, start=1):
        if n > max_depth:
            raise NoConvergence(f"no convergence within {max_depth} digits")
        if not d:
            continue
        z = n - last
        if value is None:
            value = a * (z + 1) * pi**z + 2.0 * pi ** (z + 1) / (1.0 + pi)
            lead = (1.0 - pi) ** 2 / (1.0 + pi) * z * pi ** (z - 1) + a * pi**z
            run = np.ones_like(pi)
        else:
            value = value + lead * ((1.0 - pi) * (z + 1) + pi) * run * pi**z
            run = run * (1.0 - pi) ** 2 * pi ** (z - 1) * z
        last = n
        if not finite:
            # cylinder mass up to and including this point
            bound = lead * run
            if np.all(bound <= tol):
                return value, bound
    if value is None:
        # no point before the end of a non-terminating ray: cannot happen for 0 < x < 1
        raise ValueError(f"no renewal points in the expansion of {x}")
    return value, bound


def _points_of_periodic(x: Fraction) -> Iterator[int]:
    return iter(DigitExpansion.from_rational(x, 2, TERMINATING))
