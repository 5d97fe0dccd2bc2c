import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from sympcanon.blocks import (
    BlockSpec,
    TildePsi,
    alternating_antidiagonal,
    canonical_tilde_representatives,
    is_hamiltonian,
    is_symplectic,
    jordan,
    make_block,
    make_pair_type_i,
    make_pair_type_ii,
    make_tilde_nilpotent,
    p_block,
    p_prime_block,
    q_block,
    q_prime_block,
    realified_jordan,
    tilde_exists,
)
from sympcanon.errors import PreconditionError
from sympcanon.matrices import (
    as_matrix,
    direct_sum,
    identity,
    inverse,
    is_skew_symmetric,
    is_symmetric,
    matrices_equal,
    matrix_power,
    mul,
    omega,
    rank,
    scale,
)
from sympcanon.polynomials import Polynomial, char_poly
from sympcanon.randomized import random_nonsingular
from sympcanon.spectra import is_similar

CS = (mpq(1), mpq(2), mpq(1, 3))
P = Polynomial.from_ints


def psi_p(n):
    return scale(mul(omega(n), p_block(n)), -1)


def test_make_block_examples():
    assert matrices_equal(make_block(BlockSpec("Omega", 1)), as_matrix([[0, 1], [-1, 0]]))
    assert matrices_equal(make_block(BlockSpec("Q", 1, c=mpq(3))), as_matrix([[3, 0], [0, 3]]))
    assert matrices_equal(make_block(BlockSpec("P", 1)), as_matrix([[1, 0], [0, 0]]))
    assert matrices_equal(make_block(BlockSpec("P", 2, sign=-1)), scale(p_block(2), -1))


def test_spec_validation():
    with pytest.raises(PreconditionError):
        BlockSpec("Q", 1, c=mpq(0))
    with pytest.raises(PreconditionError):
        BlockSpec("JR", 1, a=mpq(1), b=mpq(-1))
    with pytest.raises(PreconditionError):
        BlockSpec("F", poly=P([1, 2]))
    with pytest.raises(PreconditionError):
        BlockSpec("nope")


def test_frobenius_charpoly():
    p = P([2, 0, 1])
    M = make_block(BlockSpec("F", poly=p, power=3))
    assert char_poly(M) == p**3


@pytest.mark.parametrize("n", range(1, 9))
def test_charpoly_q(n):
    for c in CS:
        assert char_poly(mul(omega(n), q_block(n, c))) == P([c * c, 0, 1]) ** n


@pytest.mark.parametrize("n", range(1, 11))
def test_psi_p_nilpotent_single_block(n):
    psi = psi_p(n)
    assert rank(psi) == 2 * n - 1
    top = matrix_power(psi, 2 * n - 1)
    assert any(x != 0 for x in top.flat)
    assert not any(x != 0 for x in mul(top, psi).flat)
    J = jordan(n, 0)
    assert matrices_equal(scale(mul(psi, psi), -1), direct_sum([J.T, J]))


@pytest.mark.parametrize("n", range(1, 9))
def test_symmetry_of_blocks(n):
    for M in (p_block(n), p_prime_block(n), *(q_block(n, c) for c in CS), *(q_prime_block(n, c) for c in CS)):
        assert is_symmetric(M)
    W = omega(n)
    assert is_skew_symmetric(W)
    assert matrices_equal(mul(W, W), scale(identity(2 * n), -1))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_p_prime_similar_to_nilpotent_jordan(n):
    assert is_similar(mul(omega(n), p_prime_block(n)), jordan(2 * n, 0))


@pytest.mark.parametrize("n", [1, 3, 5, 7])
def test_q_prime_similar_to_realified(n):
    for c in CS:
        assert is_similar(mul(omega(n), q_prime_block(n, c)), realified_jordan(n, mpq(0), c))


def test_pair_type_i():
    pair = make_pair_type_i(jordan(1, mpq(5)))
    assert matrices_equal(pair.A, as_matrix([[0, 5], [5, 0]]))
    assert matrices_equal(pair.B, omega(1))
    pair2 = make_pair_type_i(jordan(2, 0))
    assert matrices_equal(pair2.A[:2, 2:], jordan(2, 0))
    assert matrices_equal(pair2.A[2:, :2], jordan(2, 0).T)


def test_pair_type_ii():
    t = TildePsi(psi_p(1), omega(1))
    one = make_pair_type_ii(t, P([1]))
    assert matrices_equal(one.A, p_block(1)) and matrices_equal(one.B, omega(1))
    neg = make_pair_type_ii(t, P([-1]))
    assert matrices_equal(neg.A, scale(p_block(1), -1)) and matrices_equal(neg.B, scale(omega(1), -1))
    with pytest.raises(PreconditionError):
        make_pair_type_ii(t, P([0, 1]))


def test_predicates():
    assert is_symplectic(omega(2)) and is_symplectic(identity(4))
    assert not is_symplectic(as_matrix([[2, 0], [0, 1]]))
    assert is_hamiltonian(omega(2))
    assert is_hamiltonian(mul(omega(3), p_block(3)))
    assert not is_hamiltonian(direct_sum([jordan(2, mpq(1)), jordan(2, mpq(1))]))


def test_tilde_exists_examples():
    assert tilde_exists(jordan(2, 0), P([0, 1]))
    assert not tilde_exists(jordan(3, 0), P([0, 1]))
    c = mpq(2)
    psi = realified_jordan(1, mpq(0), c).astype(float)
    assert tilde_exists(psi, P([c * c, 0, 1]), kind="real")
    assert not tilde_exists(psi.astype(complex), P([c * c, 0, 1]), kind="closed")


def _tilde_ok(t):
    return is_skew_symmetric(t.tilde) and rank(t.tilde) == t.tilde.shape[0] and is_symmetric(mul(t.tilde, t.psi))


def test_make_tilde_nilpotent_examples():
    t = make_tilde_nilpotent(jordan(2, 0))
    assert matrices_equal(t.tilde, as_matrix([[0, 1], [-1, 0]]))
    t4 = make_tilde_nilpotent(jordan(4, 0))
    assert matrices_equal(t4.tilde, alternating_antidiagonal(4))
    assert [t4.tilde[i, 3 - i] for i in range(4)] == [1, -1, 1, -1]


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_make_tilde_conjugated(k, seed):
    S = random_nonsingular(2 * k, seed=seed)
    psi = mul(inverse(S), jordan(2 * k, 0), S)
    assert _tilde_ok(make_tilde_nilpotent(psi))


def test_make_tilde_rejects_odd():
    with pytest.raises(PreconditionError):
        make_tilde_nilpotent(jordan(3, 0))


def test_tilde_representatives():
    (t,) = canonical_tilde_representatives(1, "closed")
    assert matrices_equal(t.psi, as_matrix([[0, 0], [1, 0]]))
    reps = canonical_tilde_representatives(1, "real", cs=(mpq(2),))
    assert matrices_equal(reps[1].psi, as_matrix([[0, -2], [2, 0]]))
    for n in range(1, 5):
        closed, *qs = canonical_tilde_representatives(n, "real", cs=CS)
        assert _tilde_ok(closed) and tilde_exists(closed.psi, P([0, 1]))
        for c, r in zip(CS, qs):
            assert _tilde_ok(r) and tilde_exists(r.psi, P([c * c, 0, 1]), kind="real")


def test_float_blocks_symmetric():
    assert is_symmetric(q_block(3, 0.5)) and np.iscomplexobj(q_block(2, 1.0, "complex"))
