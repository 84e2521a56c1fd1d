"""Built-in catalogue of validated models, including every Figure-1 sweep."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .models import BernoulliSpec, MarkovSpec, MixtureSpec, Model, RenewalSpec

SWEEP = tuple(Fraction(k, 10) for k in range(1, 10))
BETA_GRID = tuple((a, b) for a in (0.5, 1.0, 1.5) for b in (0.5, 1.0, 1.5))


def fair_coin() -> BernoulliSpec:
    return BernoulliSpec((Fraction(1, 2), Fraction(1, 2))).validate()


def cantor(pi0=Fraction(1, 2)) -> BernoulliSpec:
    pi0 = Fraction(pi0)
    return BernoulliSpec((pi0, Fraction(0), 1 - pi0)).validate()


def atom_cantor_q3() -> MarkovSpec:
    """q=3 order-1 chain: an atom at 1/2 of mass 1/3 plus a Cantor part of mass 2/3."""
    h, t = Fraction(1, 2), Fraction(1, 3)
    return MarkovSpec(3, 2, (t, t, t), ((h, 0, h), (0, 1, 0), (h, 0, h))).validate()


def forced_switch_chain() -> MarkovSpec:
    """Binary chain with ``1 -> 0`` forced: continuous but not strictly increasing."""
    h = Fraction(1, 2)
    return MarkovSpec(2, 2, (Fraction(2, 3), Fraction(1, 3)), ((h, h), (1, 0))).validate()


def corrupted_ising(delta: float = 0.05) -> MarkovSpec:
    """Ising(1/3) with row 0 perturbed by ``delta``: not invariant, unvalidated on purpose."""
    return MarkovSpec(2, 2, (0.5, 0.5), ((2 / 3 - delta, 1 / 3 + delta), (1 / 3, 2 / 3)))


def order2_chain() -> MarkovSpec:
    """An order-2 binary chain; the initial law is the stationary law on pairs."""
    T = ((0.7, 0.3), (0.4, 0.6), (0.2, 0.8), (0.5, 0.5))
    # stationary law on pairs (a, b) solves pi(b, c) = sum_a pi(a, b) T[ab][c]
    P = np.zeros((4, 4))
    for ab in range(4):
        b = ab % 2
        for c in range(2):
            P[ab, b * 2 + c] = T[ab][c]
    w, v = np.linalg.eig(P.T)
    pi = np.real(v[:, np.argmin(np.abs(w - 1))])
    pi = pi / pi.sum()
    return MarkovSpec(2, 3, tuple(float(p) for p in pi), T).validate()


def table_renewal() -> RenewalSpec:
    return RenewalSpec.table((Fraction(1, 5), Fraction(0), Fraction(3, 10)), Fraction(1, 2)).validate()


def zoo() -> dict[str, Model]:
    """Name -> validated model."""
    out: dict[str, Model] = {"fair-coin": fair_coin(), "cantor": cantor(),
                             "bernoulli-q3-skew": BernoulliSpec(
                                 (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))).validate()}
    for p in SWEEP:
        out[f"riesz-nagy-{float(p):.1f}"] = BernoulliSpec.riesz_nagy(p).validate()
    for p in SWEEP:
        out[f"ising-{float(p):.1f}"] = MarkovSpec.ising(p).validate()
    out["two-state-1-0.5"] = MarkovSpec.two_state(1, Fraction(1, 2)).validate()
    out["atom-cantor-q3"] = atom_cantor_q3()
    out["forced-switch-chain"] = forced_switch_chain()
    out["order2-chain"] = order2_chain()
    for p in SWEEP:
        out[f"nb2-{float(p):.1f}"] = RenewalSpec.nb2(p).validate()
    out["geometric-mean2"] = RenewalSpec.geometric(Fraction(1, 2)).validate()
    out["degenerate-2"] = RenewalSpec.degenerate(2).validate()
    out["degenerate-3"] = RenewalSpec.degenerate(3).validate()
    out["table-renewal"] = table_renewal()
    for b0, b1 in BETA_GRID:
        out[f"beta-poisson-{b0}-{b1}"] = MixtureSpec("dirichlet-bernoulli", (b0, b1)).validate()
    for b0, b1 in BETA_GRID:
        out[f"beta-ising-{b0}-{b1}"] = MixtureSpec("beta-ising", (b0, b1)).validate()
    out["dirichlet-q3"] = MixtureSpec("dirichlet-bernoulli", (0.5, 1.0, 2.0)).validate()
    out["beta-renewal-1-1"] = MixtureSpec("beta-renewal-nb2", (1.0, 1.0)).validate()
    out["beta-renewal-0.5-1.5"] = MixtureSpec("beta-renewal-nb2", (0.5, 1.5)).validate()
    out["mixture-fair-ising"] = MixtureSpec.discrete(
        [(Fraction(1, 2), fair_coin()), (Fraction(1, 2), MarkovSpec.ising(Fraction(1, 3)))]).validate()
    return out
