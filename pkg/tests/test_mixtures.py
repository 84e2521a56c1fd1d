import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from singcdf import (BernoulliSpec, MarkovSpec, MixtureSpec, RenewalSpec, eval_cdf, log_beta,
                     mixed_bernoulli_cdf, mixed_ising_cdf, mixed_renewal_cdf)
from singcdf.errors import BadShape, DomainError, NoConvergence
from singcdf.special import beta_expectation_nodes, log_multivariate_beta

GRID = [Fraction(k, 100) for k in range(101)]


def test_log_beta_examples():
    assert log_beta(1, 1) == 0.0
    assert math.isclose(log_beta(2, 3), math.log(1 / 12), rel_tol=1e-15)
    assert math.isclose(log_beta(0.5, 0.5), math.log(math.pi), rel_tol=1e-15)


@given(st.integers(1, 60), st.integers(1, 60))
def test_log_beta_integer_arguments_exact(a, b):
    exact = Fraction(math.factorial(a - 1) * math.factorial(b - 1), math.factorial(a + b - 1))
    ref = math.log(exact.numerator) - math.log(exact.denominator)
    assert abs(log_beta(a, b) - ref) <= 1e-12 * max(1.0, abs(ref))


@given(st.floats(1e-3, 1e7), st.floats(1e-3, 1e7))
def test_log_beta_against_mpmath(a, b):
    ref = float(mpmath.log(mpmath.beta(a, b)))
    assert abs(log_beta(a, b) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_log_beta_domain():
    with pytest.raises(DomainError):
        log_beta(0, 1)
    with pytest.raises(DomainError):
        log_multivariate_beta((1, -1))


def test_multivariate_beta():
    ref = float(mpmath.log(mpmath.gamma(0.5) * mpmath.gamma(2) * mpmath.gamma(3.5) / mpmath.gamma(6)))
    assert math.isclose(log_multivariate_beta((0.5, 2, 3.5)), ref, rel_tol=1e-14)


def test_gauss_jacobi_moments_exact():
    x, w = beta_expectation_nodes(0.5, 1.5, 20)
    for i in range(10):
        ref = float(mpmath.beta(0.5 + i, 1.5) / mpmath.beta(0.5, 1.5))
        assert math.isclose(float(np.dot(w, x**i)), ref, rel_tol=1e-12)


# -- beta-Poisson ------------------------------------------------------------

def test_mixed_bernoulli_half():
    v = mixed_bernoulli_cdf((1, 1), Fraction(1, 2))
    assert abs(v.value - 0.5) <= 1e-12 + v.truncation_bound


@pytest.mark.parametrize("shapes", [(0.5, 1.5), (1, 1), (2, 0.7), (1.5, 1.5), (3, 1)])
def test_beta_poisson_symmetry(shapes):
    b0, b1 = shapes
    for x in GRID:
        a = mixed_bernoulli_cdf((b0, b1), x)
        b = mixed_bernoulli_cdf((b1, b0), 1 - x)
        assert abs(a.value + b.value - 1) <= 1e-10 + a.truncation_bound + b.truncation_bound


def test_beta_poisson_concentrates_on_riesz_nagy():
    rn = BernoulliSpec.riesz_nagy(Fraction(1, 4)).validate()
    xs = [Fraction(k, 64) for k in range(65)]
    gap = max(abs(mixed_bernoulli_cdf((15000, 5000), x).value - eval_cdf(rn, x).value) for x in xs)
    assert gap < 0.01


def test_mixed_bernoulli_matches_walker_q3():
    spec = MixtureSpec("dirichlet-bernoulli", (0.5, 1, 2)).validate()
    for x in [Fraction(1, 7), Fraction(1, 3), Fraction(5, 9), Fraction(2, 3)]:
        a, b = mixed_bernoulli_cdf(spec, x), eval_cdf(spec, x)
        assert abs(a.value - b.value) <= 1e-12 + a.truncation_bound + b.truncation_bound


def test_beta_poisson_has_no_jump_at_endpoints_of_rays():
    # continuous mixing law: no atom at 0 or 1, F(0)=0
    v = mixed_bernoulli_cdf((0.5, 0.5), Fraction(0))
    assert v.value + v.truncation_bound <= 1e-12
    spec = MixtureSpec("dirichlet-bernoulli", (0.5, 0.5)).validate()
    assert spec.atoms() == []


def test_bad_shapes():
    with pytest.raises(BadShape):
        mixed_bernoulli_cdf((0, 1), Fraction(1, 2))
    with pytest.raises(BadShape):
        MixtureSpec("beta-ising", (1, -2)).validate()


# -- beta-Ising --------------------------------------------------------------

@pytest.mark.parametrize("shapes", [(0.5, 1.5), (1, 1), (2, 0.7), (1.5, 0.5), (4, 4)])
def test_beta_ising_symmetry(shapes):
    b0, b1 = shapes
    for x in GRID:
        a = mixed_ising_cdf(b0, b1, x)
        b = mixed_ising_cdf(b0, b1, 1 - x)
        assert abs(a.value + b.value - 1) <= 1e-10 + a.truncation_bound + b.truncation_bound


def test_beta_ising_large_equal_shapes_is_nearly_uniform():
    gap = max(abs(mixed_ising_cdf(4000, 4000, x).value - float(x)) for x in GRID)
    assert gap < 0.02


def test_beta_ising_strictly_between_rays():
    # on the alternating rays the cylinder mass decays like 1/n, so use a coarse tolerance
    lo = mixed_ising_cdf(1, 1, Fraction(1, 3), tol=1e-3)
    mid = mixed_ising_cdf(1, 1, Fraction(1, 2))
    hi = mixed_ising_cdf(1, 1, Fraction(2, 3), tol=1e-3)
    assert 0 < lo.value and lo.upper < mid.value and mid.upper < hi.value and hi.upper < 1


def test_beta_ising_slow_ray_reports_no_convergence():
    with pytest.raises(NoConvergence):
        mixed_ising_cdf(1, 1, Fraction(1, 3), tol=1e-13, max_depth=2000)


def test_beta_ising_against_walker_and_point_mass():
    spec = MixtureSpec("beta-ising", (1.5, 0.5)).validate()
    for x in [Fraction(1, 5), Fraction(3, 8), Fraction(7, 11)]:
        a, b = mixed_ising_cdf(1.5, 0.5, x), eval_cdf(spec, x)
        assert abs(a.value - b.value) <= 1e-12 + a.truncation_bound + b.truncation_bound


# -- beta-renewal ------------------------------------------------------------

def test_mixed_renewal_endpoints():
    assert mixed_renewal_cdf(1, 1, Fraction(0)).value == 0.0
    assert mixed_renewal_cdf(1, 1, Fraction(1)).value == 1.0


def test_mixed_renewal_monotone_and_bounded():
    xs = [Fraction(k, 16) for k in range(1, 16)]
    vals = [mixed_renewal_cdf(0.5, 1.5, x) for x in xs]
    for a, b in zip(vals, vals[1:]):
        assert a.value <= b.upper + 1e-12
    assert all(v.truncation_bound < 1e-8 for v in vals)


def test_mixed_renewal_concentrates_on_nb2_half():
    ref = RenewalSpec.nb2(Fraction(1, 2)).validate()
    xs = [Fraction(k, 32) for k in range(33)]
    gap = max(abs(mixed_renewal_cdf(3000, 3000, x).value - eval_cdf(ref, x).value) for x in xs)
    assert gap < 0.02


def test_mixed_renewal_matches_walker():
    spec = MixtureSpec("beta-renewal-nb2", (1, 1)).validate()
    for x in [Fraction(1, 3), Fraction(5, 8)]:
        a, b = mixed_renewal_cdf(1, 1, x, tol=1e-12), eval_cdf(spec, x, tol=1e-12)
        assert abs(a.value - b.value) <= 1e-9 + a.truncation_bound + b.truncation_bound


# -- discrete mixtures -------------------------------------------------------

def test_discrete_mixture_is_linear():
    u = BernoulliSpec.riesz_nagy(Fraction(1, 2)).validate()
    s = MarkovSpec.ising(Fraction(1, 3)).validate()
    mix = MixtureSpec.discrete([(Fraction(1, 4), u), (Fraction(3, 4), s)]).validate()
    for x in [Fraction(1, 3), Fraction(1, 2), Fraction(9, 10)]:
        ref = 0.25 * eval_cdf(u, x).value + 0.75 * eval_cdf(s, x).value
        v = eval_cdf(mix, x)
        assert abs(v.value - ref) <= 1e-12 + v.truncation_bound
