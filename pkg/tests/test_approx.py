from fractions import Fraction

import numpy as np
import pytest

from singcdf import MarkovSpec, eval_cdf, finite_dim_prob, fraction_grid, markovize, sup_gap
from singcdf.zoo import fair_coin, zoo

ZOO = zoo()


def test_markovize_is_idempotent_on_order_one():
    ising = MarkovSpec.ising(Fraction(1, 3)).validate()
    chain = markovize(ising, 2)
    assert np.allclose(np.array(chain.transitions, float),
                       np.array(ising.transitions, float), atol=1e-14, rtol=0)


def test_markovize_nb2_order_zero():
    nb2 = ZOO["nb2-0.5"]
    chain = markovize(nb2, 1)
    assert chain.m == 1
    assert abs(float(chain.transitions[0][1]) - 1 / 3) <= 1e-14
    assert abs(float(chain.transitions[0][1]) - finite_dim_prob(nb2, (1,))) <= 1e-15


def test_markovize_fair_coin():
    for m in (1, 2, 3):
        chain = markovize(fair_coin(), m)
        assert all(abs(float(p) - 0.5) <= 1e-15 for row in chain.transitions for p in row)


@pytest.mark.parametrize("name", ["nb2-0.5", "table-renewal", "beta-ising-1.0-1.0", "order2-chain",
                                  "dirichlet-q3"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_markovize_matches_marginals(name, m):
    model = ZOO[name]
    chain = markovize(model, m)
    q = model.q
    for k in range(q**m):
        digits = [(k // q**(m - 1 - i)) % q for i in range(m)]
        assert abs(finite_dim_prob(chain, digits) - finite_dim_prob(model, digits)) <= 1e-13


@pytest.mark.parametrize("m", [1, 2, 4, 8])
def test_exact_at_low_order_fractions(m):
    model = ZOO["nb2-0.5"]
    chain = markovize(model, m)
    for x in fraction_grid(2, m):
        a, b = eval_cdf(model, x), eval_cdf(chain, x)
        assert abs(a.value - b.value) <= a.truncation_bound + b.truncation_bound + 1e-12


def test_sup_gap_nb2_decreases():
    reps = [sup_gap(ZOO["nb2-0.5"], m, 10) for m in (1, 2, 4, 8)]
    gaps = [r.sup_gap for r in reps]
    assert gaps[-1] < gaps[0]
    for a, b in zip(gaps, gaps[1:]):
        assert b <= 2 * a
    assert [r.exact_match_depth for r in reps] == [1, 2, 4, 8]
    # frozen from a reference run: 0.0539, 0.0185, 0.0029, 1.01e-4
    assert 0.05 < gaps[0] < 0.06 and 5e-5 < gaps[-1] < 2e-4
    assert all(r.validity_bound >= r.sup_gap for r in reps)


def test_sup_gap_trivial_cases():
    r = sup_gap(MarkovSpec.ising(Fraction(1, 3)).validate(), 2, 8)
    assert r.sup_gap <= 1e-12
    r = sup_gap(fair_coin(), 1, 6)
    assert r.sup_gap <= 1e-15
    with pytest.raises(ValueError):
        sup_gap(fair_coin(), 4, 3)
