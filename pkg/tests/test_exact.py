from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimerspec.exact import QComplex, abs2, cos2pi, format_complex, parse_complex, unit_root

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
gaussian = st.builds(QComplex, fractions, fractions)


@pytest.mark.parametrize("text,re,im", [
    ("1", 1, 0), ("-0.5", Fraction(-1, 2), 0), ("1/3", Fraction(1, 3), 0),
    ("2i", 0, 2), ("-i", 0, -1), ("i", 0, 1), ("0.25-1.5i", Fraction(1, 4), Fraction(-3, 2)),
    ("1/2+3/4i", Fraction(1, 2), Fraction(3, 4)), ("0.1", Fraction(1, 10), 0),
])
def test_parse(text, re, im):
    assert parse_complex(text) == QComplex(re, im)


@pytest.mark.parametrize("bad", ["", "abc", "1+", "2ii", "1/0x", "i2"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_complex(bad)


@given(gaussian)
def test_format_round_trip(z):
    assert parse_complex(format_complex(z)) == z


@given(gaussian, gaussian)
def test_field_operations(a, b):
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
    assert complex(a + b) == pytest.approx(complex(a) + complex(b))
    assert (a * b).abs2() == a.abs2() * b.abs2()
    if b != QComplex(0):
        assert (a / b) * b == a


def test_abs2_kinds():
    assert abs2(QComplex(3, 4)) == 25
    assert abs2(Fraction(-1, 2)) == Fraction(1, 4)
    assert abs2(1 + 1j) == pytest.approx(2)


def test_cos2pi():
    assert cos2pi(Fraction(1, 3)) == Fraction(-1, 2)
    assert cos2pi(Fraction(5, 4)) == 0
    assert cos2pi(Fraction(1, 5)) == pytest.approx(0.30901699437494745)


def test_unit_root():
    assert unit_root(1, 4) == QComplex(0, -1)
    assert unit_root(1, 2) == QComplex(-1)
    with pytest.raises(ValueError):
        unit_root(1, 3)
