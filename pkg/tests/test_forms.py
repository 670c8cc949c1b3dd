import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quintic_strata.forms import (Form, FormError, ParseError, divides, exact_div, gcd, gcd_list, h0,
                                  linear_span_dim, monomials, parse_form, x_y_z)
from quintic_strata.linalg import GF, QQ, FieldMismatch

X, Y, Z = x_y_z()


def test_monomial_counts():
    assert [h0(d) for d in range(-1, 5)] == [0, 1, 3, 6, 10, 15]
    assert len(monomials(5)) == 21


def test_arithmetic_and_text():
    f = (X + Y) * (X - Y)
    assert f == X ** 2 - Y ** 2
    assert f.to_text() == "x^2 - y^2"
    assert parse_form("3/2*x*y - z^2").to_text() == "3/2*x*y - z^2"


def test_zero_keeps_degree():
    z = X - X
    assert z.is_zero() and z.degree == 1


def test_adding_mixed_degrees_fails():
    with pytest.raises(FormError):
        X + Y * Z


def test_fields_do_not_mix():
    with pytest.raises(FieldMismatch):
        X + Form.var("x", GF(5))


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as e:
        parse_form("x^2 + y")
    assert "homogeneous" in str(e.value)
    with pytest.raises(ParseError) as e:
        parse_form("x + $", line=3, col=10)
    assert e.value.line == 3 and e.value.col > 10


def test_exact_division():
    f = (X + 2 * Z) * (Y ** 2 + X * Z)
    assert exact_div(f, X + 2 * Z) == Y ** 2 + X * Z
    assert exact_div(f, Y) is None
    assert divides(X, X * Y) and not divides(X, Y * Z)


def test_gcd():
    a = (X + Y) * (X - Z)
    b = (X + Y) * Y * Z
    assert gcd(a, b) == (X + Y).normalized()
    assert gcd(X, Y).degree == 0
    assert gcd_list([X * Y, X * Z, X * (Y + Z)]) == X


def test_span_dim():
    assert linear_span_dim([X, Y, X + Y]) == 2
    assert linear_span_dim([X - X]) == 0


def test_substitute_and_evaluate():
    f = X * Y + Z ** 2
    g = f.substitute([Y, X, Z])
    assert g == f
    assert f.evaluate([Fraction(1), Fraction(2), Fraction(3)]) == 11


def test_reduction_mod_p():
    f = parse_form("5*x + 1/2*y")
    g = f.to_field(GF(5))
    assert g.to_text() == "3*y"


forms = st.builds(lambda d, s: Form.random(QQ, d, random.Random(s), 4),
                  st.integers(0, 3), st.integers(0, 10 ** 6))


@given(forms)
def test_print_parse_roundtrip(f):
    assert parse_form(f.to_text(), QQ, f.degree) == f


@given(forms, forms)
def test_product_divides(f, g):
    if f.is_zero() or g.is_zero():
        return
    assert exact_div(f * g, f) == g


@given(forms, forms, forms)
def test_gcd_sees_common_factor(f, g, h):
    if f.is_zero() or g.is_zero() or h.is_zero():
        return
    d = gcd(f * h, g * h)
    assert divides(h, d)
    assert divides(d, f * h) and divides(d, g * h)
