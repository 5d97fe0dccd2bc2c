import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from sympcanon.blocks import is_hamiltonian, jordan, p_block, p_prime_block, q_block, realified_jordan
from sympcanon.canonical import Decomposition, Summand
from sympcanon.errors import IndeterminateError
from sympcanon.matrices import (
    add,
    as_matrix,
    convert,
    direct_sum,
    identity,
    inverse,
    matrices_equal,
    matrix_power,
    mul,
    omega,
    rank,
    scale,
)
from sympcanon.randomized import random_nonsingular
from sympcanon.scalars import GAUSSIAN, GaussianRational
from sympcanon.spectra import (
    is_similar,
    jordan_chains,
    jordan_structure,
    ranks_from_sizes,
    sizes_from_ranks,
)

VALUES = [mpq(0), mpq(1), mpq(-2), mpq(1, 2)]


@st.composite
def jordan_matrices(draw, max_blocks=4, max_size=3):
    k = draw(st.integers(1, max_blocks))
    blocks = [jordan(draw(st.integers(1, max_size)), draw(st.sampled_from(VALUES))) for _ in range(k)]
    return direct_sum(blocks)


def _rank_sequence(M, lam, upto):
    N = add(convert(M, GAUSSIAN), scale(identity(M.shape[0], GAUSSIAN), -GAUSSIAN.convert(lam)))
    return [rank(matrix_power(N, k)) for k in range(upto + 1)]


def test_examples():
    s = jordan_structure(jordan(3, mpq(5)))
    assert list(s) == [(5, (3,))]
    for n in (1, 2, 3):
        c = mpq(2)
        s = jordan_structure(mul(omega(n), q_block(n, c)))
        assert s.sizes_at(GaussianRational(0, c)) == (n,)
        assert s.sizes_at(GaussianRational(0, -c)) == (n,)
        assert len(s) == 2
        assert list(jordan_structure(scale(mul(omega(n), p_block(n)), -1))) == [(0, (2 * n,))]


def test_chain_examples():
    (ch,) = jordan_chains(jordan(2, 0), 0)
    assert matrices_equal(ch.matrix(), identity(2))
    (ch,) = jordan_chains(as_matrix([[0, 0], [1, 0]]), 0)
    assert matrices_equal(ch.matrix(), as_matrix([[0, 1], [1, 0]]))
    chains = jordan_chains(direct_sum([jordan(2, 0), jordan(1, 0)]), 0)
    assert sorted(c.length for c in chains) == [1, 2]


@given(jordan_matrices(), st.integers(0, 2**32 - 1))
def test_chain_relations(M, seed):
    S = random_nonsingular(M.shape[0], seed=seed)
    M = mul(inverse(S), M, S)
    lam = jordan_structure(M).eigenvalues()[0]
    N = add(M, scale(identity(M.shape[0]), -lam))
    chains = jordan_chains(M, lam)
    assert sum(c.length for c in chains) == sum(jordan_structure(M).sizes_at(lam))
    for c in chains:
        assert not matrices_equal(c.vectors[0], scale(c.vectors[0], 0))
        assert not any(x != 0 for x in mul(N, c.vectors[0]).flat)
        for a, b in zip(c.vectors, c.vectors[1:]):
            assert matrices_equal(mul(N, b), a)
    assert rank(np.concatenate([c.matrix() for c in chains], axis=1)) == sum(c.length for c in chains)


def test_similarity_examples():
    for n in (1, 2, 3):
        assert is_similar(mul(omega(n), p_prime_block(n)), jordan(2 * n, 0))
    assert not is_similar(jordan(2, 0), direct_sum([jordan(1, 0), jordan(1, 0)]))


@given(jordan_matrices(), st.integers(0, 2**32 - 1))
def test_similarity_invariance(M, seed):
    S = random_nonsingular(M.shape[0], seed=seed)
    N = mul(inverse(S), M, S)
    assert is_similar(M, N)
    assert jordan_structure(M) == jordan_structure(N)


@given(jordan_matrices(max_blocks=5, max_size=4))
def test_weyr_segre_duality(M):
    s = jordan_structure(M)
    assert s.dimension == M.shape[0]
    for lam, sizes in s:
        upto = max(sizes) + 1
        assert _rank_sequence(M, lam, upto) == ranks_from_sizes(M.shape[0], sizes, upto)
        assert sizes_from_ranks(ranks_from_sizes(M.shape[0], sizes, upto)) == sizes


def test_weyr_on_realified():
    M = direct_sum([realified_jordan(2, mpq(1), mpq(2)), jordan(2, mpq(1))])
    s = jordan_structure(M)
    lam = GaussianRational(1, 2)
    assert s.sizes_at(lam) == (2,) and s.sizes_at(lam.conjugate()) == (2,)
    assert _rank_sequence(M, lam, 3) == ranks_from_sizes(6, (2,), 3)


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_hamiltonian_spectrum_symmetric(m, seed):
    rng = np.random.default_rng(seed)
    R = rng.standard_normal((2 * m, 2 * m))
    H = mul(omega(m, "real"), R + R.T)
    assert is_hamiltonian(H)
    s = jordan_structure(H)
    for lam, sizes in s:
        assert s.sizes_at(-lam, 1e-6) == sizes


def test_exact_hamiltonian_spectrum_symmetric():
    dec = Decomposition((Summand("Q", 2, 1, c=mpq(3)), Summand("P", 1), Summand("hyperbolic", 2, a=mpq(2))))
    H = mul(omega(dec.size // 2), dec.assemble())
    s = jordan_structure(H)
    for lam, sizes in s:
        assert s.sizes_at(-lam) == sizes


def test_float_structure_defective():
    rng = np.random.default_rng(1)
    S = rng.standard_normal((5, 5)) + 3 * np.eye(5)
    M = S @ convert(direct_sum([jordan(3, mpq(1)), jordan(2, mpq(-1))]), "real") @ np.linalg.inv(S)
    # the default threshold sees a split cluster and refuses to guess
    with pytest.raises(IndeterminateError):
        jordan_structure(M)
    s = jordan_structure(M, 1e-6)
    assert s.sizes_at(1.0, 1e-6) == (3,) and s.sizes_at(-1.0, 1e-6) == (2,)
