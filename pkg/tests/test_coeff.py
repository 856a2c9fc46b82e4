"""Finite field and p-adic coefficient layer.

Expected values here are frozen from independent oracles computed inside the
tests themselves (exhaustive searches and direct factoring), not from the
implementation under test.
"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hlf.coeff import (
    UNKNOWN,
    FqField,
    PAdicApprox,
    padic_val,
    rational_mod_p,
    teichmuller,
    teichmuller_exact,
)
from hlf.errors import FieldMismatchError, ZeroElementError

F5 = FqField(5)
F4 = FqField(4, modulus=(1, 1, 1))  # w^2 + w + 1


def test_inverse_in_f5_matches_exhaustive_search():
    # oracle: the unique y with 2*y = 1 mod 5
    oracle = [y for y in range(5) if (2 * y) % 5 == 1]
    assert oracle == [3]
    assert F5(2).inverse() == F5(3)


def test_f4_product_of_w_and_w_plus_1():
    # oracle by hand reduction: w*(w+1) = w^2 + w = (w + 1) + w = 1 mod w^2+w+1
    w = F4.generator()
    assert w * (w + F4(1)) == F4(1)


def test_f4_is_a_field_exhaustively():
    elems = list(F4.elements())
    assert len(elems) == 4
    one = F4.one()
    for a in elems:
        for b in elems:
            assert (a + b) - b == a
            assert a * b == b * a
            for c in elems:
                assert a * (b + c) == a * b + a * c
        if a:
            assert a * a.inverse() == one


def test_f5_multiplicative_orders_divide_4():
    for a in F5.elements():
        if a:
            assert 4 % a.multiplicative_order() == 0


def test_field_mismatch_rejected():
    with pytest.raises(FieldMismatchError):
        F5(1) + F4(1)


def test_padic_val_of_18_base_3():
    # oracle: 18 = 2 * 3^2
    assert 18 == 2 * 3**2
    assert padic_val(18, 3) == 2
    assert padic_val(Fraction(18, 5), 3) == 2
    assert padic_val(Fraction(5, 18), 3) == -2


def test_padic_val_zero_refused():
    with pytest.raises(ZeroElementError):
        padic_val(0, 3)


@given(
    st.fractions(min_value=Fraction(-1000), max_value=Fraction(1000)).filter(lambda x: x != 0),
    st.fractions(min_value=Fraction(-1000), max_value=Fraction(1000)).filter(lambda x: x != 0),
)
def test_padic_val_additive_on_products(x, y):
    assert padic_val(x * y, 3) == padic_val(x, 3) + padic_val(y, 3)


def test_teichmuller_of_2_mod_9():
    # oracle: x with x = 2 mod 3 and x^3 = x mod 9; scan 0..8
    oracle = [x for x in range(9) if x % 3 == 2 and pow(x, 3, 9) == x % 9]
    assert oracle == [8]
    t = teichmuller(2, 3, prec=2)
    assert t.unit % 9 == 8
    assert t.valuation() == 0


def test_teichmuller_fixed_point_to_depth():
    t = teichmuller(2, 5, prec=6)
    m = 5**6
    assert pow(t.unit, 5, m) == t.unit % m
    assert t.unit % 5 == 2


def test_teichmuller_exact_small_residues():
    assert teichmuller_exact(0, 5) == 0
    assert teichmuller_exact(1, 5) == 1
    assert teichmuller_exact(4, 5) == -1
    assert teichmuller_exact(2, 5) is None
    # p = 3 is covered completely
    assert all(teichmuller_exact(a, 3) is not None for a in range(3))


def test_unsettled_approximation_reports_unknown():
    # both digits zero mod 3^2 without exactness
    x = PAdicApprox.unsettled(3, 2)
    assert x.valuation() is UNKNOWN
    assert not x.is_exact_zero()


def test_cancellation_degrades_to_unsettled():
    a = PAdicApprox.from_rational(Fraction(1, 2), 3, prec=4)
    b = PAdicApprox.from_rational(Fraction(-1, 2), 3, prec=4)
    s = a + b
    assert s.valuation() is UNKNOWN


def test_approx_arithmetic_tracks_exact_values():
    for xv, yv in [(Fraction(7, 2), Fraction(9, 4)), (Fraction(-6), Fraction(1, 3))]:
        x = PAdicApprox.from_rational(xv, 3, prec=8)
        y = PAdicApprox.from_rational(yv, 3, prec=8)
        assert (x * y).valuation() == padic_val(xv * yv, 3)
        if xv + yv != 0:
            assert (x + y).valuation() == padic_val(xv + yv, 3)


def test_rational_mod_p():
    # 1/2 = 3 in F_5 since 2*3 = 6 = 1
    assert rational_mod_p(Fraction(1, 2), 5) == 3
    assert rational_mod_p(18, 3) == 0
