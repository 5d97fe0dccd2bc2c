"""Executable battery of the exact structural identities behind the canonical blocks.

Each identity is checked in exact arithmetic for every ``n <= bound`` and
every ``c`` in :data:`C_VALUES`.  Constructors are injectable so that tests
can feed a deliberately broken block and watch the right identity fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from gmpy2 import mpq

from . import blocks
from .matrices import (
    add,
    convert,
    det,
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
    zeros,
)
from .polynomials import Polynomial, char_poly
from .scalars import GAUSSIAN, RATIONAL, GaussianRational, rational_str
from .spectra import is_similar

C_VALUES = (mpq(1), mpq(2), mpq(1, 3))
MAX_BOUND = 10


@dataclass(frozen=True)
class Constructors:
    p: Callable = blocks.p_block
    q: Callable = blocks.q_block
    p_prime: Callable = blocks.p_prime_block
    q_prime: Callable = blocks.q_prime_block
    omega: Callable = omega


@dataclass
class IdentityResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures}


@dataclass
class VerifyReport:
    bound: int
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]

    def to_json(self) -> dict:
        return {"bound": self.bound, "passed": self.passed, "identities": [r.to_json() for r in self.results]}


def _ci(c) -> GaussianRational:
    return GaussianRational(0, c)


def _shifted(ctor: Constructors, n: int, c) -> np.ndarray:
    """``ci I - Omega_n Q_n(c)`` over the Gaussian rationals."""
    H = convert(mul(ctor.omega(n), ctor.q(n, c)), GAUSSIAN)
    return add(scale(identity(2 * n, GAUSSIAN), _ci(c)), scale(H, -1))


def deleted_minor(ctor: Constructors, n: int, c) -> np.ndarray:
    """``ci I - Omega_n Q_n(c)`` without its column ``n`` (0-based) and its last row."""
    M = _shifted(ctor, n, c)
    return np.delete(np.delete(M, n, axis=1), 2 * n - 1, axis=0)


def q_prime_conjugator(n: int) -> np.ndarray:
    """Reversal of size ``n`` plus ``diag(1, 1, -1, -1, 1, 1, ...)``."""
    rev = zeros(n, n)
    d = zeros(n, n)
    for i in range(n):
        rev[i, n - 1 - i] = mpq(1)
        d[i, i] = mpq(1) if (i // 2) % 2 == 0 else mpq(-1)
    return direct_sum([rev, d])


def companion_bidiagonal(n: int, c) -> np.ndarray:
    """Block upper bidiagonal with ``C = [[0, 1], [-c^2, 0]]`` on the diagonal and ``I_2`` above it."""
    M = zeros(2 * n, 2 * n)
    for k in range(n):
        M[2 * k, 2 * k + 1] = mpq(1)
        M[2 * k + 1, 2 * k] = -c * c
        if k + 1 < n:
            M[2 * k, 2 * k + 2] = M[2 * k + 1, 2 * k + 3] = mpq(1)
    return M


def _psi(ctor, n):
    return scale(mul(ctor.omega(n), ctor.p(n)), -1)


def _check_charpoly(ctor, n, c):
    target = Polynomial.from_ints([c * c, 0, 1]) ** n
    return char_poly(mul(ctor.omega(n), ctor.q(n, c))) == target


def _check_rank_p(ctor, n, c):
    return rank(_psi(ctor, n)) == 2 * n - 1


def _check_nilpotent_p(ctor, n, c):
    psi = _psi(ctor, n)
    top = matrix_power(psi, 2 * n - 1)
    return any(x != 0 for x in top.flat) and not any(x != 0 for x in mul(top, psi).flat)


def _check_square_p(ctor, n, c):
    psi = _psi(ctor, n)
    J = blocks.jordan(n, 0, RATIONAL)
    return matrices_equal(scale(mul(psi, psi), -1), direct_sum([J.T, J]))


def _check_rank_shift(ctor, n, c):
    return rank(_shifted(ctor, n, c)) == 2 * n - 1


def _check_det_minor(ctor, n, c):
    if n % 2 == 0:
        return None
    value = det(deleted_minor(ctor, n, c))
    return value == _ci(c) * (2 * _ci(c)) ** (n - 1)


def _check_q_prime_similarity(ctor, n, c):
    if n % 2 == 0:
        return matrices_equal(ctor.q_prime(n, c), ctor.q(n, c))
    S = q_prime_conjugator(n)
    M = mul(inverse(S), ctor.omega(n), ctor.q_prime(n, c), S)
    realified = blocks.realified_jordan(n, mpq(0), c, RATIONAL)
    return matrices_equal(M, companion_bidiagonal(n, c)) and is_similar(M, realified)


def _check_p_prime_chain(ctor, n, c):
    H = mul(ctor.omega(n), ctor.p_prime(n))
    # e_{2n} -> e_{2n-1} -> ... -> e_{n+1} -> e_1 -> ... -> e_n -> 0, up to sign
    order = list(range(2 * n - 1, n - 1, -1)) + list(range(n))
    for src, dst in zip(order, order[1:] + [None]):
        col = H[:, src]
        want = zeros(2 * n, 1)[:, 0]
        if dst is not None:
            want[dst] = mpq(1)
        if not (matrices_equal(col, want) or matrices_equal(col, scale(want, -1))):
            return False
    return rank(H) == 2 * n - 1


def _check_symmetry(ctor, n, c):
    W = ctor.omega(n)
    return (
        all(is_symmetric(M) for M in (ctor.p(n), ctor.p_prime(n), ctor.q(n, c), ctor.q_prime(n, c)))
        and is_skew_symmetric(W)
        and matrices_equal(mul(W, W), scale(identity(2 * n), -1))
    )


def _check_tilde(ctor, n, c):
    reps = blocks.canonical_tilde_representatives(n, "real", cs=(c,))
    t = blocks.make_tilde_nilpotent(blocks.jordan(2 * n, 0, RATIONAL))
    return all(_tilde_ok(r.psi, r.tilde) for r in reps + [t])


def _tilde_ok(psi, tilde) -> bool:
    return is_skew_symmetric(tilde) and rank(tilde) == tilde.shape[0] and is_symmetric(mul(tilde, psi))


IDENTITIES: dict[str, Callable] = {
    "charpoly_omega_q": _check_charpoly,
    "rank_omega_p": _check_rank_p,
    "nilpotency_omega_p": _check_nilpotent_p,
    "square_omega_p": _check_square_p,
    "rank_imaginary_shift": _check_rank_shift,
    "det_deleted_minor": _check_det_minor,
    "q_prime_similarity": _check_q_prime_similarity,
    "p_prime_chain": _check_p_prime_chain,
    "symmetry": _check_symmetry,
    "tilde_conditions": _check_tilde,
}

# identities that do not depend on c are run once per n
_C_FREE = {"rank_omega_p", "nilpotency_omega_p", "square_omega_p", "p_prime_chain"}


def verify_suite(bound: int = 3, constructors: Constructors | None = None, names=None) -> VerifyReport:
    """Run the identity battery for ``1 <= n <= bound``.

    A crashing check counts as a failure of that identity, recorded with the
    exception text.
    """
    if not 1 <= bound <= MAX_BOUND:
        raise ValueError(f"bound must be in 1..{MAX_BOUND}")
    ctor = constructors or Constructors()
    results = []
    for name, check in IDENTITIES.items():
        if names is not None and name not in names:
            continue
        res = IdentityResult(name)
        for n in range(1, bound + 1):
            for c in C_VALUES[:1] if name in _C_FREE else C_VALUES:
                try:
                    ok = check(ctor, n, c)
                except Exception as exc:  # a broken constructor must not abort the battery
                    ok = False
                    res.failures.append(f"n={n}, c={rational_str(c)}: {type(exc).__name__}: {exc}")
                    res.checked += 1
                    continue
                if ok is None:
                    continue
                res.checked += 1
                if not ok:
                    res.failures.append(f"n={n}" if name in _C_FREE else f"n={n}, c={rational_str(c)}")
        results.append(res)
    return VerifyReport(bound, results)


__all__ = [
    "C_VALUES",
    "Constructors",
    "IDENTITIES",
    "IdentityResult",
    "VerifyReport",
    "companion_bidiagonal",
    "deleted_minor",
    "q_prime_conjugator",
    "verify_suite",
]
