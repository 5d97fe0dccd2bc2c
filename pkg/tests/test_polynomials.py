import sympy
from conftest import int_matrices
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from sympcanon.blocks import jordan, q_block
from sympcanon.matrices import as_matrix, mul, omega, zeros
from sympcanon.polynomials import Polynomial, char_poly, factor_exact, is_irreducible, poly_is_even

P = Polynomial.from_ints


def test_even_examples():
    assert poly_is_even(P([4, 0, 1]))
    assert not poly_is_even(P([0, 1]))
    assert poly_is_even(P([1, 0, 3, 0, 1]))


def test_charpoly_examples():
    assert char_poly(omega(1)) == P([1, 0, 1])
    assert char_poly(jordan(2, 0)) == P([0, 0, 1])
    for c in (mpq(1), mpq(2), mpq(1, 3)):
        assert char_poly(mul(omega(2), q_block(2, c))) == P([c * c, 0, 1]) ** 2


@given(int_matrices(max_n=6))
def test_charpoly_matches_sympy(rows):
    M = as_matrix(rows)
    x = sympy.Symbol("x")
    ref = sympy.Matrix(rows).charpoly(x).all_coeffs()[::-1]
    assert char_poly(M) == P([int(c) for c in ref])


@given(int_matrices(max_n=8))
def test_cayley_hamilton(rows):
    M = as_matrix(rows)
    n = M.shape[0]
    assert (char_poly(M).evaluate_matrix(M) == zeros(n, n)).all()


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=7))
def test_product_with_reflection_is_even(coeffs):
    p = P(coeffs)
    assert poly_is_even(p * p.reflect())


def test_factorization():
    f = P([1, 0, 1]) ** 2 * P([-2, 1])
    got = sorted((q.degree, m) for q, m in factor_exact(f))
    assert got == [(1, 1), (2, 2)]
    assert is_irreducible(P([1, 0, 1]))
    assert not is_irreducible(P([-1, 0, 1]))
