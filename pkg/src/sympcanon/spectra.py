"""Eigenvalues, Jordan block sizes and Jordan chains.

Block sizes come from rank sequences: if ``r_k = rank(p(M)^k)`` for an
irreducible factor ``p`` of the characteristic polynomial, then each root of
``p`` has ``(r_{k-1} - r_k) / deg p`` Jordan blocks of size at least ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .errors import IndeterminateError, PreconditionError, UnsupportedSpectrum
from .matrices import (
    add,
    convert,
    field_of,
    identity,
    is_square,
    mul,
    nullspace,
    rank,
    scale,
)
from .polynomials import Polynomial, char_poly, factor_exact
from .scalars import GAUSSIAN, GaussianRational, QuadraticNumber, get_tolerance, quadratic, scalar_eq

# ---------------------------------------------------------------------------
# Weyr / Segre conversion


def sizes_from_ranks(ranks) -> tuple[int, ...]:
    """Block sizes (descending) from ``r_0, r_1, ...`` with ``r_0 = n``.

    ``ranks`` is a rank sequence for a single eigenvalue, scaled to one root.
    """
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k, cnt in enumerate(at_least, start=1):
        nxt = at_least[k] if k < len(at_least) else 0
        sizes += [k] * (cnt - nxt)
    return tuple(sorted(sizes, reverse=True))


def ranks_from_sizes(n: int, sizes, upto: int | None = None) -> list[int]:
    """``rank((M - λ)^k)`` for ``k = 0..upto`` implied by the block sizes at ``λ``."""
    upto = max(sizes, default=0) if upto is None else upto
    return [n - sum(min(s, k) for s in sizes) for k in range(upto + 1)]


# ---------------------------------------------------------------------------
# exact primary structure


@dataclass(frozen=True)
class PrimaryComponent:
    """An irreducible factor ``p`` of the characteristic polynomial and the block sizes at each of its roots."""

    p: Polynomial
    sizes: tuple

    @property
    def multiplicity(self) -> int:
        return sum(self.sizes)


def _rank_sequence(T: np.ndarray, floor: int) -> list[int]:
    """Ranks of ``T^0, T^1, ...`` until they reach ``floor``."""
    n = T.shape[0]
    ranks = [n]
    P = T
    while True:
        r = rank(P)
        ranks.append(r)
        if r <= floor or r == ranks[-2]:
            break
        P = mul(P, T)
    return ranks


def primary_structure(M: np.ndarray) -> list[PrimaryComponent]:
    """Factor-level Jordan data of an exact matrix (any factor degree)."""
    if not is_square(M):
        raise PreconditionError("Jordan structure of a non-square matrix")
    if not field_of(M).exact:
        raise TypeError("primary_structure needs an exact backend")
    n = M.shape[0]
    out = []
    for p, mult in factor_exact(char_poly(M)):
        d = p.degree
        ranks = _rank_sequence(p.evaluate_matrix(M), n - d * mult)
        if ranks[-1] != n - d * mult:
            raise ArithmeticError("rank sequence does not reach the algebraic multiplicity")
        per_root = [(r - (n - d * mult)) // d for r in ranks]
        out.append(PrimaryComponent(p, sizes_from_ranks(per_root)))
    return out


def _as_real(x):
    if isinstance(x, GaussianRational):
        return x.real if x.imag == 0 else None
    return x


def roots_of(p: Polynomial) -> list:
    """Exact roots of a monic irreducible factor of degree at most two."""
    if p.degree == 1:
        return [-p[0]]
    if p.degree == 2:
        beta, gamma = (_as_real(p[1]), _as_real(p[0]))
        if beta is None or gamma is None:
            raise UnsupportedSpectrum(f"roots of {p} lie outside Q(i)")
        disc = beta * beta - 4 * gamma
        half = mpq(1, 2)
        return [quadratic(-beta / 2, half, disc), quadratic(-beta / 2, -half, disc)]
    raise UnsupportedSpectrum(f"irreducible factor {p} has degree {p.degree} > 2")


# ---------------------------------------------------------------------------
# floating eigenvalue clusters


def cluster_eigenvalues(w: np.ndarray, threshold: float, real_input: bool) -> list[tuple[complex, int]]:
    """Single-linkage clusters of ``w`` as ``(center, count)``; conjugates averaged for real input."""
    n = len(w)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(w[i] - w[j]) <= threshold:
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(w[i])
    clusters = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    if not real_input:
        return clusters
    out = []
    used = set()
    for k, (z, cnt) in enumerate(clusters):
        if k in used:
            continue
        if abs(z.imag) <= threshold:
            out.append((complex(z.real, 0.0), cnt))
            used.add(k)
            continue
        mate = min(
            (j for j in range(len(clusters)) if j not in used and j != k),
            key=lambda j: abs(clusters[j][0] - z.conjugate()),
            default=None,
        )
        if mate is None or clusters[mate][1] != cnt or abs(clusters[mate][0] - z.conjugate()) > 10 * threshold + 1e-3 * abs(z):
            raise IndeterminateError("complex eigenvalue cluster without a conjugate partner")
        zz = (z + clusters[mate][0].conjugate()) / 2
        used.update((k, mate))
        out += [(zz, cnt), (zz.conjugate(), cnt)]
    return out


def _float_sizes(M: np.ndarray, lam: complex, mult: int, tol: float | None) -> tuple[int, ...]:
    n = M.shape[0]
    T = M.astype(complex) - lam * np.eye(n)
    ranks = [n]
    # staircase: ker T^(k+1) = ker (I - V V^*) T with V an orthonormal basis of
    # ker T^k, so every rank decision is made at the scale of T, never of T^k
    tn = float(np.linalg.norm(T, 2))
    V = np.zeros((n, 0), dtype=complex)
    for _ in range(mult + 1):
        V = nullspace(T - V @ (V.conj().T @ T), tol, ref=tn)
        ranks.append(n - V.shape[1])
        if ranks[-1] == ranks[-2]:
            break
    sizes = sizes_from_ranks(ranks)
    # a stable nullity different from the cluster size means the cluster is
    # either part of a larger split cluster or a merge of distinct ones
    if sum(sizes) != mult or ranks[-1] != n - mult:
        raise IndeterminateError(f"rank sequence at eigenvalue {lam:.6g} does not match its cluster size {mult}")
    return sizes


# ---------------------------------------------------------------------------
# public structure


@dataclass(frozen=True, eq=False)
class JordanStructure:
    """Eigenvalues with their Jordan block sizes (descending)."""

    entries: tuple  # of (eigenvalue, sizes)

    @property
    def dimension(self) -> int:
        return sum(sum(s) for _, s in self.entries)

    def sizes_at(self, lam, tol: float | None = None) -> tuple:
        for mu, s in self.entries:
            if _same(mu, lam, tol):
                return s
        return ()

    def eigenvalues(self) -> list:
        return [mu for mu, _ in self.entries]

    def __eq__(self, other):
        if not isinstance(other, JordanStructure):
            return NotImplemented
        return structures_match(self, other)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _same(a, b, tol=None) -> bool:
    try:
        return scalar_eq(a, b, tol)
    except Exception:
        return abs(complex(a) - complex(b)) <= (get_tolerance() if tol is None else tol) * max(1.0, abs(complex(a)))


def structures_match(S1: JordanStructure, S2: JordanStructure, tol: float | None = None) -> bool:
    if len(S1) != len(S2):
        return False
    left = list(S2.entries)
    for mu, s in S1.entries:
        k = next((i for i, (nu, t) in enumerate(left) if t == s and _same(mu, nu, tol)), None)
        if k is None:
            return False
        left.pop(k)
    return True


def _sort_key(lam):
    z = complex(lam)
    return (round(z.real, 12), round(z.imag, 12))


def jordan_structure(M: np.ndarray, tol: float | None = None) -> JordanStructure:
    """Eigenvalues and Jordan block sizes of a square matrix.

    Exact backends support characteristic polynomials whose irreducible
    factors have degree at most two; floating backends cluster eigenvalues
    at ``10 * eps * ||M||``.
    """
    if not is_square(M):
        raise PreconditionError("Jordan structure of a non-square matrix")
    n = M.shape[0]
    if n == 0:
        return JordanStructure(())
    field = field_of(M)
    entries = []
    if field.exact:
        for comp in primary_structure(M):
            for lam in roots_of(comp.p):
                entries.append((lam, comp.sizes))
    else:
        eps = get_tolerance() if tol is None else tol
        norm = max(1.0, float(np.linalg.norm(M, 2)))
        w = np.linalg.eigvals(M)
        clusters = cluster_eigenvalues(w, 10 * eps * norm, real_input=not np.iscomplexobj(M))
        for lam, cnt in clusters:
            entries.append((lam if np.iscomplexobj(M) or lam.imag else float(lam.real), _float_sizes(M, lam, cnt, tol)))
    entries.sort(key=lambda e: _sort_key(e[0]))
    return JordanStructure(tuple(entries))


def is_similar(M: np.ndarray, N: np.ndarray, tol: float | None = None) -> bool:
    """Similarity over the algebraic closure, decided by Jordan data."""
    if M.shape != N.shape or not is_square(M):
        raise PreconditionError("is_similar needs square matrices of the same size")
    fm, fn = field_of(M), field_of(N)
    if fm.exact != fn.exact:
        raise PreconditionError("is_similar needs matrices on the same backend")
    if fm.exact:
        a, b = primary_structure(M), primary_structure(N)
        key = lambda c: (c.p.degree, str(c.p))  # noqa: E731
        return [(c.p, c.sizes) for c in sorted(a, key=key)] == [(c.p, c.sizes) for c in sorted(b, key=key)]
    return structures_match(jordan_structure(M, tol), jordan_structure(N, tol), tol)


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True, eq=False)
class JordanChain:
    """``vectors[0]`` is an eigenvector; ``(M - λ) vectors[j+1] = vectors[j]``."""

    eigenvalue: object
    vectors: tuple

    @property
    def length(self) -> int:
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        return np.concatenate(self.vectors, axis=1)


def _shift(M: np.ndarray, lam) -> np.ndarray:
    f = field_of(M)
    if f.exact:
        if isinstance(lam, GaussianRational) and not lam.is_real:
            M = convert(M, GAUSSIAN)
            f = GAUSSIAN
        elif isinstance(lam, QuadraticNumber) and not isinstance(lam, GaussianRational) and lam.coef != 0:
            raise UnsupportedSpectrum(f"chains at {lam} need an extension field")
        return add(M, scale(identity(M.shape[0], f), -f.convert(lam)))
    lam = complex(lam)
    if lam.imag == 0 and not np.iscomplexobj(M):
        return M - lam.real * np.eye(M.shape[0])
    return M.astype(complex) - lam * np.eye(M.shape[0])


def jordan_chains(M: np.ndarray, lam, tol: float | None = None) -> list[JordanChain]:
    """One chain per Jordan block at ``lam``, longest first, jointly independent."""
    if not is_square(M):
        raise PreconditionError("Jordan chains of a non-square matrix")
    N = _shift(M, lam)
    n = N.shape[0]
    f = field_of(N)
    kernels = [np.zeros((n, 0), dtype=N.dtype)]
    P = identity(n, f)
    while True:
        P = mul(P, N)
        K = nullspace(P, tol)
        if K.shape[1] == kernels[-1].shape[1]:
            break
        kernels.append(K)
    if len(kernels) == 1:
        raise PreconditionError(f"{lam} is not an eigenvalue")
    top = len(kernels) - 1
    chains: list[JordanChain] = []
    for k in range(top, 0, -1):
        # vectors at height k coming from longer chains
        inherited = [c.vectors[k - 1] for c in chains]
        base = [kernels[k - 1]] + inherited
        B = np.concatenate(base, axis=1) if base else np.zeros((n, 0), dtype=N.dtype)
        r = rank(B) if B.shape[1] else 0
        for j in range(kernels[k].shape[1]):
            g = kernels[k][:, j : j + 1]
            trial = np.concatenate([B, g], axis=1)
            rt = rank(trial)
            if rt > r:
                B, r = trial, rt
                vecs = [g]
                for _ in range(k - 1):
                    vecs.append(mul(N, vecs[-1]))
                chains.append(JordanChain(lam, tuple(vecs[::-1])))
    chains.sort(key=lambda c: -c.length)
    return chains


__all__ = [
    "JordanChain",
    "JordanStructure",
    "PrimaryComponent",
    "cluster_eigenvalues",
    "is_similar",
    "jordan_chains",
    "jordan_structure",
    "primary_structure",
    "ranks_from_sizes",
    "roots_of",
    "sizes_from_ranks",
    "structures_match",
]
