from fractions import Fraction

import numpy as np
import pytest

from singcdf import (MarkovSpec, MixtureSpec, NotInvariant, check_functional_equation, eval_cdf,
                     ks_distance, singularity_scan)
from singcdf.models import sample_values
from singcdf.verify import SCAN_SLACK, VerificationReport, likelihood_ratio_terms, singularity_check
from singcdf.zoo import cantor, corrupted_ising, fair_coin, zoo


def test_functional_equation_examples():
    r = check_functional_equation(fair_coin(), 6)
    assert r.passed and r.max_residual <= 1e-12
    r = check_functional_equation(MarkovSpec.ising(Fraction(1, 3)).validate(), 6, tol=1e-10)
    assert r.passed


def test_functional_equation_negative_control():
    bad = corrupted_ising(0.05)
    with pytest.raises(NotInvariant):
        bad.validate()
    r = check_functional_equation(bad, 6)
    assert not r.passed and r.witnesses and r.max_residual > 1e-3


def test_failed_report_needs_witness():
    with pytest.raises(ValueError):
        VerificationReport("x", 1.0, 0.1, False)


@pytest.mark.parametrize("model", [fair_coin(), cantor(), MixtureSpec("beta-ising", (1, 1)).validate()])
def test_ks_examples(model):
    r = ks_distance(model, 10**5, seed=0)
    assert r.tolerance == pytest.approx(0.0051545, abs=1e-6)
    assert r.passed and r.max_residual < 0.0052


def test_ks_detects_wrong_model():
    r = ks_distance(MarkovSpec.ising(Fraction(1, 3)).validate(), 10**4, seed=0,
                    grid=[Fraction(k, 16) for k in range(1, 16)])
    assert r.passed
    # samples of one model against the CDF of another
    vals = np.sort(sample_values(fair_coin(), 10**4, seed=0))
    emp = np.searchsorted(vals, 0.25, side="right") / 1e4
    assert abs(emp - eval_cdf(cantor(), Fraction(1, 4)).value) > 0.05


def test_singularity_scan_examples():
    assert singularity_scan(fair_coin(), 200, 200, seed=0) == 1.0
    frac = singularity_scan(MarkovSpec.ising(Fraction(1, 3)).validate(), 200, 200, seed=0)
    # about 1.25% of fair-coin points still have 2^n p > 1/2 at n = 200
    assert frac <= 0.02
    assert singularity_scan(MarkovSpec.ising(Fraction(1, 3)).validate(), 200, 1000, seed=0) == 0.0


def test_singularity_check_and_mixture_advisory():
    z = zoo()
    assert singularity_check(fair_coin()).passed
    assert singularity_check(z["ising-0.3"]).passed
    r = singularity_check(z["mixture-fair-ising"])
    assert r.details["advisory"] and r.details["uniform_weight"] == 0.5
    assert SCAN_SLACK == 0.05


def test_likelihood_ratio_terms_direct_product():
    ising = MarkovSpec.ising(Fraction(1, 3)).validate()
    path = np.array([[0, 1, 1, 0, 0]])
    # 2^5 * 1/2 * 1/3 * 2/3 * 1/3 * 2/3
    assert likelihood_ratio_terms(ising, path)[0] == pytest.approx(32 * 0.5 * (1 / 3) * (2 / 3) * (1 / 3) * (2 / 3))
