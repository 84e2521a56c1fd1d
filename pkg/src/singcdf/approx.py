"""Markov approximations of stationary digit processes.

``markovize(model, m)`` is the order-(m-1) chain whose m-dimensional
marginals coincide with those of ``model``.  Its CDF agrees with the original
one exactly at base-q fractions of order at most ``m`` and converges
uniformly as ``m`` grows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cdf import DEFAULT_TOL, eval_cdf
from .digits import fraction_grid, is_base_q_fraction
from .models import MarkovSpec, Model, finite_dim_prob

EXACT_SLACK = 1e-12


@dataclass(frozen=True)
class ApproxReport:
    m: int
    sup_gap: float
    exact_match_depth: int
    validity_bound: float
    grid_order: int
    worst_x: object = None


def markovize(model: Model, m: int) -> MarkovSpec:
    """Order-(m-1) chain with ``p(x_1..x_m)`` copied from ``model``; unreachable contexts get uniform rows."""
    if m < 1:
        raise ValueError("m must be at least 1")
    q = model.q
    c = m - 1
    initial, rows = [], []
    for ctx in itertools.product(range(q), repeat=c):
        pc = finite_dim_prob(model, ctx)
        initial.append(pc)
        if pc > 0:
            kids = [finite_dim_prob(model, ctx + (k,)) for k in range(q)]
            total = sum(kids)
            rows.append(tuple(v / total for v in kids))
        else:
            rows.append((1.0 / q,) * q)
    if c == 0:
        initial = [1.0]
    total = sum(initial)
    initial = [v / total for v in initial]
    return MarkovSpec(q, m, tuple(initial), tuple(rows)).validate()


def sup_gap(model: Model, m: int, grid_order: int, tol: float = DEFAULT_TOL) -> ApproxReport:
    """Compare ``F`` and ``F^(m)`` on all base-q fractions of order <= ``grid_order``.

    ``validity_bound`` bounds the sup-norm over the whole interval when both
    CDFs are continuous: the grid gap plus the largest grid increment.
    """
    if grid_order < m:
        raise ValueError("grid order must be at least m")
    q = model.q
    approx = markovize(model, m)
    xs = fraction_grid(q, grid_order, include_endpoints=True)
    F = [eval_cdf(model, x, tol) for x in xs]
    G = [eval_cdf(approx, x, tol) for x in xs]
    gap, worst = 0.0, None
    mismatch_order = grid_order + 1
    for x, a, b in zip(xs, F, G):
        d = abs(a.value - b.value)
        slack = a.truncation_bound + b.truncation_bound + EXACT_SLACK
        if d > slack:
            order = is_base_q_fraction(x, q) or 0
            mismatch_order = min(mismatch_order, max(order, 1))
        if d > gap:
            gap, worst = d, x
    incr = max(max(F[i + 1].upper - F[i].value for i in range(len(xs) - 1)),
               max(G[i + 1].upper - G[i].value for i in range(len(xs) - 1)))
    bounds = max(a.truncation_bound + b.truncation_bound for a, b in zip(F, G))
    return ApproxReport(m, gap, mismatch_order - 1, gap + incr + bounds, grid_order, worst)
