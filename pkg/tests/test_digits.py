from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import naive_prefix_stats
from singcdf import DigitExpansion, PointConfiguration, digits_of, fraction_grid, is_base_q_fraction
from singcdf.digits import BaseQFraction, prefix_stats
from singcdf.errors import PrefixTooLong


@pytest.mark.parametrize("x,q,form,expected", [
    (Fraction(1, 2), 2, "non_terminating", (0, 1, 1, 1)),
    (Fraction(1, 2), 2, "terminating", (1, 0, 0, 0)),
    (Fraction(1, 3), 3, "non_terminating", (0, 2, 2, 2)),
    (Fraction(1, 3), 2, "non_terminating", (0, 1, 0, 1)),
    (Fraction(0), 2, "non_terminating", (0, 0, 0, 0)),
    (Fraction(1), 3, "non_terminating", (2, 2, 2, 2)),
])
def test_digits_of_examples(x, q, form, expected):
    assert digits_of(x, q, form, 4) == expected


@pytest.mark.parametrize("x,q,order", [
    (Fraction(3, 8), 2, 3), (Fraction(1, 3), 2, None), (Fraction(1, 3), 3, 1),
    (Fraction(0), 2, None), (Fraction(1), 2, None), (Fraction(5, 9), 3, 2),
])
def test_is_base_q_fraction(x, q, order):
    assert is_base_q_fraction(x, q) == order


def test_prefix_stats_examples():
    s = prefix_stats((0, 1, 1, 0), 2)
    assert (s.pattern(0, 1), s.pattern(1, 1), s.pattern(1, 0), s.pattern(0, 0)) == (1, 1, 1, 0)
    assert s.switches == 2
    empty = prefix_stats((), 2)
    assert sum(empty.counts) == 0 and sum(empty.patterns.values()) == 0 and empty.switches == 0
    s = prefix_stats((1, 1, 1), 1)
    assert s.counts == (0, 3) and s.switches == 0


def test_digit_cap():
    with pytest.raises(PrefixTooLong):
        DigitExpansion.from_rational(Fraction(1, 3), 2).digits(11, cap=10)


def test_fraction_grid():
    assert fraction_grid(2, 2) == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert len(fraction_grid(3, 3, include_endpoints=True)) == 28


rationals = st.builds(lambda n, d: Fraction(n % (d + 1), d), st.integers(0, 10**6), st.integers(1, 10**4))
bases = st.integers(2, 7)


@given(rationals, bases)
def test_periodic_form_round_trip(x, q):
    e = DigitExpansion.from_rational(x, q)
    pre, block = e.periodic_form()
    back = DigitExpansion.from_prefix(pre, q, block)
    assert back.value == x
    n = len(pre) + 3 * len(block)
    assert back.digits(n) == e.digits(n)


@given(st.integers(1, 8), bases, st.data())
def test_dual_expansions_of_fractions(order, q, data):
    k = data.draw(st.integers(1, q**order - 1))
    x = Fraction(k, q**order)
    n = 30
    t = DigitExpansion.from_rational(x, q, "terminating").digits(n)
    nt = DigitExpansion.from_rational(x, q, "non_terminating").digits(n)
    m = is_base_q_fraction(x, q)
    assert t[m:] == (0,) * (n - m)
    assert nt[m:] == (q - 1,) * (n - m)
    assert t[m - 1] == nt[m - 1] + 1 and t[:m - 1] == nt[:m - 1]
    assert BaseQFraction.from_value(x, q).value == x
    # the value of a long prefix approaches x from below
    assert 0 <= x - sum(Fraction(d, q**(i + 1)) for i, d in enumerate(nt)) <= Fraction(1, q**n)


@given(st.lists(st.integers(0, 2), max_size=40), st.integers(1, 3))
def test_prefix_stats_matches_naive_count(digits, j):
    s = prefix_stats(digits, j, q=3)
    counts, pats, switches = naive_prefix_stats(digits, j, 3)
    assert list(s.counts) == counts and s.switches == switches
    assert {k: v for k, v in s.patterns.items() if v} == pats


@given(st.lists(st.integers(0, 1), max_size=30))
def test_point_configuration_round_trip(digits):
    pc = PointConfiguration.from_digits(digits)
    assert pc.to_digits() == tuple(digits)
    assert pc.expansion().digits(len(digits)) == tuple(digits)
