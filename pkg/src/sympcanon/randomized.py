"""Random test instances: symplectic matrices and canonical assemblies."""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from .canonical import Decomposition, Summand
from .matrices import (
    MatrixPair,
    as_matrix,
    convert,
    direct_sum,
    identity,
    inverse,
    mul,
    rank,
    zeros,
)
from .scalars import RATIONAL, REAL, GaussianRational

PARAMS = (mpq(1, 2), mpq(1), mpq(2), mpq(3))


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _unimodular(n: int, rng) -> list[list[int]]:
    U = np.eye(n, dtype=int)
    for _ in range(2 * n):
        i, j = rng.choice(n, size=2, replace=False) if n > 1 else (0, 0)
        if i == j:
            continue
        U[i] += int(rng.integers(-1, 2)) * U[j]
    if n:
        perm = rng.permutation(n)
        U = U[perm]
    return U.tolist()


def _elementary(m: int, field, rng, which: int) -> np.ndarray:
    n = 2 * m
    S = identity(n, field)
    if which < 2:
        K = zeros(m, m, field)
        for i in range(m):
            for j in range(i, m):
                v = int(rng.integers(-1, 2)) if field.exact else rng.uniform(-1, 1)
                if field.is_complex and not field.exact:
                    v = complex(v, rng.uniform(-1, 1))
                K[i, j] = K[j, i] = field.convert(v)
        if which == 0:
            S[:m, m:] = K
        else:
            S[m:, :m] = K
        return S
    if field.exact:
        U = as_matrix(_unimodular(m, rng), field)
    else:
        U = rng.standard_normal((m, m)) + np.eye(m) * 2
        if field.is_complex:
            U = U + 1j * rng.standard_normal((m, m))
    return direct_sum([U, inverse(U).T])


def random_symplectic(m: int, field=RATIONAL, seed=None, factors: int = 8) -> np.ndarray:
    """A product of at most 20 elementary symplectic factors of size ``2m``.

    Exact factors use integer shears and unimodular ``diag(U, U^{-T})`` so the
    entries stay small; floating shears draw from ``[-1, 1]``.
    """
    rng = _rng(seed)
    factors = min(max(1, factors), 20)
    S = identity(2 * m, field)
    for _ in range(factors):
        S = mul(S, _elementary(m, field, rng, int(rng.integers(0, 3))))
    return S


def random_nonsingular(n: int, field=RATIONAL, seed=None) -> np.ndarray:
    rng = _rng(seed)
    while True:
        if field.exact:
            M = as_matrix(rng.integers(-2, 3, size=(n, n)).tolist(), field)
        else:
            M = rng.standard_normal((n, n))
            if field.is_complex:
                M = M + 1j * rng.standard_normal((n, n))
            M = convert(M, field)
        if rank(M) == n:
            return M


def random_spd(n: int, seed=None) -> np.ndarray:
    """``R^T R + I/10`` with a Gaussian ``R``."""
    rng = _rng(seed)
    R = rng.standard_normal((n, n))
    return R.T @ R + 0.1 * np.eye(n)


def random_real_summand(rng, max_n: int = 3) -> Summand:
    """A summand from the real list: hyperbolic (real, zero, realified), ±P, ±Q."""
    choice = int(rng.integers(0, 5))
    sign = 1 if rng.random() < 0.5 else -1
    p = lambda: PARAMS[int(rng.integers(0, len(PARAMS)))]
    n = int(rng.integers(1, max_n + 1))
    if choice == 0:
        return Summand("hyperbolic", n, a=p())
    if choice == 1:
        return Summand("hyperbolic", 2 * int(rng.integers(0, max_n // 2 + 1)) + 1 if max_n > 1 else 1, a=mpq(0))
    if choice == 2:
        k = int(rng.integers(1, max(1, max_n // 2) + 1))
        return Summand("hyperbolic", 2 * k, a=p(), b=p())
    if choice == 3:
        return Summand("P", n, sign)
    return Summand("Q", n, sign, c=p())


def _gaussian_param(rng) -> GaussianRational:
    re = PARAMS[int(rng.integers(0, len(PARAMS)))]
    im = [mpq(0), mpq(1), mpq(-1), mpq(1, 2)][int(rng.integers(0, 4))]
    return GaussianRational(re, im)


def random_complex_summand(rng, max_n: int = 3) -> Summand:
    """A summand from the complex list: hyperbolic ``J_n(a)`` (``a != 0`` for even ``n``) or ``P_n``."""
    n = int(rng.integers(1, max_n + 1))
    choice = int(rng.integers(0, 3))
    if choice == 0:
        a = _gaussian_param(rng)
        if rng.random() < 0.5:
            a = -a  # stored as given; comparisons identify a with -a
        return Summand("hyperbolic", n, a=a)
    if choice == 1:
        return Summand("hyperbolic", 2 * int(rng.integers(0, (max_n + 1) // 2)) + 1, a=GaussianRational(0, 0))
    return Summand("P", n)


def random_real_decomposition(seed=None, max_summands: int = 6, max_n: int = 3) -> Decomposition:
    rng = _rng(seed)
    k = int(rng.integers(1, max_summands + 1))
    return Decomposition(tuple(random_real_summand(rng, max_n) for _ in range(k)))


def random_complex_decomposition(seed=None, max_summands: int = 6, max_n: int = 3) -> Decomposition:
    rng = _rng(seed)
    k = int(rng.integers(1, max_summands + 1))
    return Decomposition(tuple(random_complex_summand(rng, max_n) for _ in range(k)), kind="complex")


def conjugated_instance(dec: Decomposition, seed=None, field=None, factors: int = 8):
    """``(S^T C S, S)`` for the assembled canonical ``C`` and a random symplectic ``S``."""
    rng = _rng(seed)
    C = dec.assemble(field)
    from .matrices import field_of

    f = field_of(C)
    m = C.shape[0] // 2
    S = random_symplectic(m, RATIONAL if f.exact else REAL, rng, factors)
    if f != RATIONAL:
        S = convert(S, f)
    A = mul(S.T, C, S)
    if not f.exact:
        A = (A + A.T) / 2
    return A, S


def random_pair(dec: Decomposition, seed=None) -> MatrixPair:
    """A general pair congruent to ``(C, Omega)`` through a random nonsingular matrix."""
    rng = _rng(seed)
    from .matrices import field_of, omega

    C = dec.assemble()
    f = field_of(C)
    n = C.shape[0]
    T = random_nonsingular(n, RATIONAL if f.exact else REAL, rng)
    if f != RATIONAL:
        T = convert(T, f)
    return MatrixPair(mul(T.T, C, T), mul(T.T, omega(n // 2, f), T))


__all__ = [
    "PARAMS",
    "conjugated_instance",
    "random_complex_decomposition",
    "random_complex_summand",
    "random_nonsingular",
    "random_pair",
    "random_real_decomposition",
    "random_real_summand",
    "random_spd",
    "random_symplectic",
]
