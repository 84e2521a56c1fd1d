"""Verification harness: functional equation, Monte Carlo, singularity scans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .cdf import DEFAULT_TOL, MIXED, SINGULAR, DISCRETE, UNIFORM, classify, eval_cdf
from .digits import fraction_grid
from .models import Model, sample_paths, sample_values

KS_COEFF = 1.63
# finite-depth scans of singular laws still show a few percent of large ratios
SCAN_SLACK = 0.05


@dataclass(frozen=True)
class VerificationReport:
    check: str
    max_residual: float
    tolerance: float
    passed: bool
    witnesses: tuple = ()
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and not self.witnesses:
            raise ValueError("a failed check must carry a witness")

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "passed": bool(self.passed),
            "witnesses": [str(w) for w in self.witnesses],
            "details": self.details,
        }


def check_functional_equation(model: Model, max_order: int = 6, tol: float = 1e-9,
                              eval_tol: float = DEFAULT_TOL) -> VerificationReport:
    """``F(x) = F(0) + sum_j [F((x+j)/q) - F(j/q)]`` at every base-q fraction of order <= g.

    The model is evaluated as given, without validation, so non-stationary
    inputs produce residuals instead of errors.
    """
    q = model.q
    cache: dict[Fraction, tuple[float, float]] = {}

    def F(x: Fraction):
        if x not in cache:
            v = eval_cdf(model, x, eval_tol)
            cache[x] = (v.value, v.truncation_bound)
        return cache[x]

    f0, b0 = F(Fraction(0))
    worst, witness, passed = 0.0, None, True
    failures = []
    for x in fraction_grid(q, max_order):
        lhs, bl = F(x)
        rhs, br = f0, b0
        for j in range(q):
            a, ba = F((x + j) / q)
            c, bc = F(Fraction(j, q))
            rhs += a - c
            br += ba + bc
        r = abs(lhs - rhs)
        if r > tol + bl + br:
            passed = False
            failures.append(x)
        if r > worst or witness is None:
            worst, witness = r, x
    wit = tuple(failures[:5]) if failures else (witness,)
    return VerificationReport("functional_equation", worst, tol, passed, wit,
                              {"max_order": max_order, "points": len(fraction_grid(q, max_order)),
                               "failures": len(failures)})


def default_ks_grid(q: int) -> list[Fraction]:
    order = 1
    while q ** (order + 1) <= 2048:
        order += 1
    return fraction_grid(q, order)


def ks_distance(model: Model, n_samples: int = 10**5, seed=0, grid: Optional[Sequence] = None,
                depth: int = 64, tol: float = 1e-12) -> VerificationReport:
    """Grid sup of ``|empirical CDF - F|`` for depth-truncated samples of ``X``."""
    if n_samples < 1:
        raise ValueError("need at least one sample")
    xs = list(grid) if grid is not None else default_ks_grid(model.q)
    values = np.sort(sample_values(model, n_samples, depth, seed))
    stat, witness = 0.0, xs[0]
    for x in xs:
        emp = np.searchsorted(values, float(x), side="right") / n_samples
        v = eval_cdf(model, x, tol)
        # distance from the empirical value to the certified interval
        d = max(emp - v.upper, v.value - emp, 0.0)
        if d > stat:
            stat, witness = d, x
    threshold = KS_COEFF / math.sqrt(n_samples)
    return VerificationReport("ks", float(stat), threshold, bool(stat < threshold), (witness,),
                              {"samples": n_samples, "seed": seed, "grid_points": len(xs)})


def likelihood_ratio_terms(model: Model, paths: np.ndarray) -> np.ndarray:
    """``q^n p(x_1..x_n)`` for each row of ``paths``."""
    q = model.q
    out = np.empty(len(paths))
    for i, row in enumerate(paths):
        cyl = model.cylinder()
        ratio = 1.0
        for d in row:
            parent = cyl.mass
            cyl = cyl.child(int(d))
            ratio = ratio * q * (cyl.mass / parent) if parent > 0 else 0.0
            if ratio == 0.0:
                break
        out[i] = ratio
    return out


def singularity_scan(model: Model, points: int = 200, depth: int = 200, seed=0,
                     mode: str = "lebesgue", threshold: float = 0.5) -> float:
    """Fraction of sampled ``x`` with ``q^n p(x_1..x_n) > threshold``.

    ``mode="lebesgue"`` draws fair-coin digits; ``mode="model"`` draws from the
    model itself (advisory only).
    """
    rng = np.random.default_rng(seed)
    if mode == "lebesgue":
        paths = rng.integers(0, model.q, size=(points, depth))
    elif mode == "model":
        paths = sample_paths(model, points, depth, rng)
    else:
        raise ValueError(f"unknown scan mode {mode!r}")
    terms = likelihood_ratio_terms(model, paths)
    return float(np.mean(terms > threshold))


def singularity_check(model: Model, points: int = 200, depth: int = 200, seed=0) -> VerificationReport:
    """Compare the scan with the classification: about 1 for uniform, about 0 for singular."""
    c = classify(model)
    frac = singularity_scan(model, points, depth, seed)
    if c.verdict == UNIFORM:
        passed, resid = frac >= 1.0 - SCAN_SLACK, 1.0 - frac
    elif c.verdict in (SINGULAR, DISCRETE):
        passed, resid = frac <= SCAN_SLACK, frac
    else:
        # mixed laws: the scan tends to the uniform weight only in the limit
        passed, resid = True, abs(frac - c.uniform_weight)
    return VerificationReport("singularity", float(resid), SCAN_SLACK, bool(passed), (c.verdict,),
                              {"fraction": frac, "verdict": c.verdict,
                               "uniform_weight": c.uniform_weight, "advisory": not (
                                   c.verdict in (UNIFORM, SINGULAR, DISCRETE))})
