import pytest
from conftest import rationals
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from sympcanon.errors import BackendMismatch
from sympcanon.scalars import (
    GAUSSIAN,
    RATIONAL,
    REAL,
    GaussianRational,
    QuadraticNumber,
    backend_of,
    exact_sign,
    quadratic,
    rational_str,
    scalar_eq,
    scalar_from_json,
    scalar_to_json,
    sqrt_exact,
    to_rational,
    tolerance,
)


def test_lowest_terms_equal():
    assert scalar_eq(mpq(1, 2), mpq(2, 4))


def test_float_within_tolerance():
    with tolerance(1e-9):
        assert scalar_eq(1.0, 1.0 + 0.5e-9)
        assert not scalar_eq(1.0, 1.0 + 3e-9)


def test_distinct_rationals():
    assert not scalar_eq(mpq(1, 2), mpq(1, 3))


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        scalar_eq(mpq(1, 2), 0.5)


def test_rational_string_form():
    assert rational_str(to_rational("6/-4")) == "-3/2"
    assert rational_str(mpq(2)) == "2/1"
    assert to_rational("-3/2").denominator > 0


def test_backend_tags():
    assert backend_of(mpq(1)) == RATIONAL
    assert backend_of(GaussianRational(1, 2)) == GAUSSIAN
    assert backend_of(1.5) == REAL


def test_quadratic_collapses():
    assert quadratic(1, 2, 4) == 5
    assert isinstance(quadratic(0, 1, -1), GaussianRational)
    assert isinstance(sqrt_exact(2), QuadraticNumber)
    assert sqrt_exact(2) * sqrt_exact(2) == 2


def test_quadratic_sign():
    # 1 - sqrt(2) < 0, 3 - sqrt(2) > 0
    assert exact_sign(quadratic(1, -1, 2)) == -1
    assert exact_sign(quadratic(3, -1, 2)) == 1


@given(rationals, rationals)
def test_gaussian_field_axioms(a, b):
    z = GaussianRational(a, b)
    w = GaussianRational(b, a)
    assert z * w == w * z
    assert z + w - w == z
    if a or b:
        assert z * (1 / z) == 1
    assert (z * z.conjugate()).imag == 0


@given(rationals)
def test_rational_json_round_trip(q):
    assert scalar_from_json(scalar_to_json(q)) == q


@given(rationals, rationals)
def test_gaussian_json_round_trip(a, b):
    z = GaussianRational(a, b)
    assert scalar_from_json(scalar_to_json(z)) == z


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_complex_json(re, im):
    assert scalar_from_json(scalar_to_json(complex(re, im))) == complex(re, im)
