"""Dense matrices over the scalar backends.

Matrices are plain numpy arrays: ``float64``/``complex128`` for the floating
backends and ``object`` arrays holding :class:`gmpy2.mpq` or
:class:`~sympcanon.scalars.GaussianRational` entries for the exact ones.
Functions here never modify their arguments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .errors import PreconditionError
from .scalars import (
    COMPLEX,
    GAUSSIAN,
    RATIONAL,
    REAL,
    Field,
    GaussianRational,
    QuadraticNumber,
    get_field,
    get_tolerance,
    scalar_from_json,
    scalar_to_json,
    to_rational,
)

# ---------------------------------------------------------------------------
# construction and conversion


def field_of(M: np.ndarray) -> Field:
    """Backend of a matrix, read from its dtype (and entries for object arrays)."""
    kind = M.dtype.kind
    if kind in "fiub":
        return REAL
    if kind == "c":
        return COMPLEX
    if kind == "O":
        for x in M.flat:
            if isinstance(x, GaussianRational):
                return GAUSSIAN
        return RATIONAL
    raise TypeError(f"unsupported dtype {M.dtype}")


def _infer_field(values) -> Field:
    field = None
    for x in values:
        if isinstance(x, GaussianRational) or (isinstance(x, QuadraticNumber) and not x.is_real):
            f = GAUSSIAN
        elif isinstance(x, (float, np.floating)):
            f = REAL
        elif isinstance(x, (complex, np.complexfloating)):
            f = COMPLEX
        else:
            f = RATIONAL
        field = f if field is None else _join_fields(field, f)
    return field or RATIONAL


def _join_fields(f: Field, g: Field) -> Field:
    if f == g:
        return f
    if f.exact and g.exact:
        return GAUSSIAN
    if not f.exact and not g.exact:
        return COMPLEX
    exact, floating = (f, g) if f.exact else (g, f)
    if floating.is_complex or exact.is_complex:
        return COMPLEX
    return REAL


def as_matrix(rows, field=None) -> np.ndarray:
    """Build a matrix from nested sequences (or an array), converting every entry.

    With ``field`` given, complex entries may be written as ``[re, im]`` pairs.
    """
    if isinstance(rows, np.ndarray):
        arr = rows if rows.ndim == 2 else rows.reshape(-1, rows.shape[-1] if rows.ndim else 1)
        if field is not None:
            return convert(arr, field)
        if arr.dtype.kind in "iub":
            return convert(arr.astype(object), RATIONAL)
        if arr.dtype.kind == "O":
            return convert(arr, field_of(arr))
        return arr.copy()
    rows = [list(r) for r in rows]
    if rows and len({len(r) for r in rows}) != 1:
        raise PreconditionError("ragged rows")
    ncols = len(rows[0]) if rows else 0
    field = _infer_field(x for r in rows for x in r) if field is None else get_field(field)
    out = np.empty((len(rows), ncols), dtype=field.dtype)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = field.convert(x)
    return out


def convert(M: np.ndarray, field) -> np.ndarray:
    field = get_field(field)
    out = np.empty(M.shape, dtype=field.dtype)
    if field.exact:
        for idx in np.ndindex(M.shape):
            out[idx] = field.convert(M[idx])
    else:
        if M.dtype.kind == "O":
            for idx in np.ndindex(M.shape):
                out[idx] = field.convert(M[idx])
        else:
            out[...] = M
    return out


def identity(n: int, field=RATIONAL) -> np.ndarray:
    field = get_field(field)
    out = zeros(n, n, field)
    for i in range(n):
        out[i, i] = field.one
    return out


def zeros(rows: int, cols: int | None = None, field=RATIONAL) -> np.ndarray:
    field = get_field(field)
    cols = rows if cols is None else cols
    if not field.exact:
        return np.zeros((rows, cols), dtype=field.dtype)
    out = np.empty((rows, cols), dtype=object)
    z = field.zero
    for idx in np.ndindex(out.shape):
        out[idx] = z
    return out


def scale(M: np.ndarray, c) -> np.ndarray:
    field = field_of(M)
    if field.exact:
        c = field.convert(c)
        out = np.empty(M.shape, dtype=object)
        for idx in np.ndindex(M.shape):
            out[idx] = M[idx] * c
        return out
    return M * c


def omega(n: int, field=RATIONAL) -> np.ndarray:
    """The standard symplectic form ``[[0, I_n], [-I_n, 0]]``."""
    field = get_field(field)
    out = zeros(2 * n, 2 * n, field)
    for i in range(n):
        out[i, n + i] = field.one
        out[n + i, i] = -field.one
    return out


# ---------------------------------------------------------------------------
# products


def _split(M: np.ndarray):
    """Real and imaginary mpq parts of a Gaussian matrix."""
    re = np.empty(M.shape, dtype=object)
    im = np.empty(M.shape, dtype=object)
    for idx in np.ndindex(M.shape):
        x = M[idx]
        if isinstance(x, GaussianRational):
            re[idx], im[idx] = x.re, x.coef
        else:
            re[idx], im[idx] = to_rational(x), mpq(0)
    return re, im


def _join(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    out = np.empty(re.shape, dtype=object)
    for idx in np.ndindex(re.shape):
        out[idx] = GaussianRational(re[idx], im[idx])
    return out


def mul(*Ms: np.ndarray) -> np.ndarray:
    """Matrix product of the arguments, left to right."""
    if not Ms:
        raise ValueError("mul() needs at least one matrix")
    out = Ms[0]
    for M in Ms[1:]:
        out = _mul2(out, M)
    return out


def _mul2(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if X.shape[1] != Y.shape[0]:
        raise PreconditionError(f"cannot multiply {X.shape} by {Y.shape}")
    fx, fy = field_of(X), field_of(Y)
    if not (fx.exact and fy.exact):
        if fx.exact:
            X = convert(X, _join_fields(fx, fy))
        if fy.exact:
            Y = convert(Y, _join_fields(fx, fy))
        return X @ Y
    if fx == RATIONAL and fy == RATIONAL:
        if 0 in X.shape or 0 in Y.shape:
            return zeros(X.shape[0], Y.shape[1], RATIONAL)
        return X @ Y
    xr, xi = _split(X)
    yr, yi = _split(Y)
    if 0 in X.shape or 0 in Y.shape:
        return zeros(X.shape[0], Y.shape[1], GAUSSIAN)
    return _join(xr @ yr - xi @ yi, xr @ yi + xi @ yr)


def add(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    f = _join_fields(field_of(X), field_of(Y))
    return convert(X, f) + convert(Y, f) if f.exact else X + Y


def matrix_power(M: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        return matrix_power(inverse(M), -k)
    result = identity(M.shape[0], field_of(M))
    base = M
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def conj_transpose(M: np.ndarray) -> np.ndarray:
    if M.dtype.kind == "O":
        out = np.empty((M.shape[1], M.shape[0]), dtype=object)
        for i, j in np.ndindex(M.shape):
            x = M[i, j]
            out[j, i] = x.conjugate() if isinstance(x, QuadraticNumber) else x
        return out
    return M.conj().T


# ---------------------------------------------------------------------------
# predicates and norms


def max_abs(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    if M.dtype.kind == "O":
        return max(abs(complex(x)) for x in M.flat)
    return float(np.max(np.abs(M)))


def fro_norm(M: np.ndarray) -> float:
    if M.dtype.kind == "O":
        return float(np.sqrt(sum(abs(complex(x)) ** 2 for x in M.flat)))
    return float(np.linalg.norm(M))


def _entry_tol(M: np.ndarray, tol: float | None) -> float:
    eps = get_tolerance() if tol is None else tol
    return eps * (1.0 + max_abs(M))


def matrices_equal(M: np.ndarray, N: np.ndarray, tol: float | None = None) -> bool:
    """Exact equality on exact backends, entrywise ``eps*(1+max|M|)`` on floats."""
    if M.shape != N.shape:
        return False
    if field_of(M).exact and field_of(N).exact:
        return all(a == b for a, b in zip(M.flat, N.flat))
    M = np.asarray(convert(M, COMPLEX) if M.dtype.kind == "O" else M)
    N = np.asarray(convert(N, COMPLEX) if N.dtype.kind == "O" else N)
    t = (get_tolerance() if tol is None else tol) * (1.0 + max(max_abs(M), max_abs(N)))
    return bool(np.all(np.abs(M - N) <= t))


def is_square(M: np.ndarray) -> bool:
    return M.ndim == 2 and M.shape[0] == M.shape[1]


def is_symmetric(M: np.ndarray, tol: float | None = None) -> bool:
    return is_square(M) and matrices_equal(M, M.T, tol)


def is_skew_symmetric(M: np.ndarray, tol: float | None = None) -> bool:
    return is_square(M) and matrices_equal(M, -M.T, tol)


def is_hermitian(M: np.ndarray, tol: float | None = None) -> bool:
    return is_square(M) and matrices_equal(M, conj_transpose(M), tol)


# ---------------------------------------------------------------------------
# exact elimination kernels


def _integer_rows(M: np.ndarray) -> list[list]:
    """Scale each row of a rational matrix by the lcm of its denominators."""
    rows = []
    for r in M.tolist():
        q = [to_rational(x) for x in r]
        den = mpz(1)
        for x in q:
            den = gmpy2.lcm(den, x.denominator)
        rows.append([x.numerator * (den // x.denominator) for x in q])
    return rows


def _row_scales(M: np.ndarray) -> list:
    scales = []
    for r in M.tolist():
        den = mpz(1)
        for x in r:
            den = gmpy2.lcm(den, to_rational(x).denominator)
        scales.append(den)
    return scales


def _bareiss(rows: list[list], exact_div) -> tuple[int, object, int]:
    """Fraction-free elimination in place.

    Returns ``(rank, last_pivot, sign)``; for a nonsingular square input the
    determinant is ``sign * last_pivot``.
    """
    n = len(rows)
    m = len(rows[0]) if n else 0
    prev = 1
    r = 0
    sign = 1
    for c in range(m):
        if r == n:
            break
        piv = None
        for i in range(r, n):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        pr = rows[r]
        for i in range(r + 1, n):
            ri = rows[i]
            f = ri[c]
            if f:
                ri[c:] = [exact_div(p * ri[j] - f * pr[j], prev) for j in range(c, m)]
            else:
                ri[c:] = [exact_div(p * ri[j], prev) for j in range(c, m)]
        prev = p
        r += 1
    return r, prev, sign


def _floordiv(a, b):
    return a // b


def _truediv(a, b):
    return a / b


def _realify(M: np.ndarray) -> np.ndarray:
    """``[[X, -Y], [Y, X]]`` for a Gaussian ``M = X + iY`` (an mpq matrix)."""
    re, im = _split(M)
    return np.block([[re, -im], [im, re]])


def _rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over an exact field (in place)."""
    n = len(rows)
    m = len(rows[0]) if n else 0
    pivots: list[int] = []
    r = 0
    for c in range(m):
        if r == n:
            break
        piv = None
        for i in range(r, n):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        pr[c:] = [x * inv for x in pr[c:]]
        for i in range(n):
            if i != r:
                ri = rows[i]
                f = ri[c]
                if f:
                    ri[c:] = [a - f * b for a, b in zip(ri[c:], pr[c:])]
        pivots.append(c)
        r += 1
    return rows, pivots


def _exact_rows(M: np.ndarray) -> list[list]:
    if field_of(M) == GAUSSIAN:
        return [[GAUSSIAN.convert(x) for x in r] for r in M.tolist()]
    return [[to_rational(x) for x in r] for r in M.tolist()]


# ---------------------------------------------------------------------------
# numerical kernels


def numerical_rank(M: np.ndarray, tol: float | None = None, ref: float = 0.0) -> int:
    """Rank from singular values.

    The largest relative gap in the singular-value sequence (values below
    the rounding level clipped) decides the rank when it exceeds 1e3 and the
    values below it are under ``sqrt(eps)*||M||``;
    otherwise the threshold ``eps*||M||`` is used.  ``ref`` is a lower bound
    for ``||M||``, for matrices that are computed as a cancelling expression.
    """
    if M.size == 0:
        return 0
    s = np.linalg.svd(np.asarray(M), compute_uv=False)
    if s[0] == 0:
        return 0
    eps = get_tolerance() if tol is None else tol
    top = max(s[0], ref)
    # values below the rounding level all count as zero, so noise-among-noise
    # ratios cannot masquerade as a gap
    clipped = np.maximum(s, np.finfo(float).eps * top * max(M.shape))
    ratios = clipped[:-1] / clipped[1:]
    k = int(np.argmax(ratios)) if len(ratios) else 0
    if len(ratios) and ratios[k] > 1e3 and s[k + 1] <= np.sqrt(eps) * top:
        return k + 1
    return int(np.sum(s > eps * top))


# ---------------------------------------------------------------------------
# public linear algebra


def rank(M: np.ndarray, tol: float | None = None) -> int:
    """Exact rank (fraction-free elimination) or numerical rank on floats."""
    if M.size == 0:
        return 0
    field = field_of(M)
    if not field.exact:
        return numerical_rank(M, tol)
    if field == GAUSSIAN:
        return rank(_realify(M)) // 2
    rows = _integer_rows(M)
    if M.shape[0] > M.shape[1]:
        rows = [list(r) for r in zip(*rows)]
    return _bareiss(rows, _floordiv)[0]


def det(M: np.ndarray):
    """Determinant; Bareiss elimination on exact backends."""
    if not is_square(M):
        raise PreconditionError(f"determinant of non-square {M.shape} matrix")
    n = M.shape[0]
    field = field_of(M)
    if n == 0:
        return field.one
    if not field.exact:
        return np.linalg.det(M)
    if field == RATIONAL:
        scales = _row_scales(M)
        rows = _integer_rows(M)
        r, last, sign = _bareiss(rows, _floordiv)
        if r < n:
            return mpq(0)
        total = mpz(1)
        for s in scales:
            total *= s
        return mpq(sign * last, total)
    rows = [list(r) for r in M.tolist()]
    r, last, sign = _bareiss(rows, _truediv)
    if r < n:
        return GaussianRational(0, 0)
    return last * sign


def rref(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    field = field_of(M)
    if not field.exact:
        raise TypeError("rref is only defined on exact backends")
    rows, pivots = _rref(_exact_rows(M))
    out = np.empty(M.shape, dtype=object)
    for i, r in enumerate(rows):
        out[i, :] = r
    return out, pivots


def nullspace(M: np.ndarray, tol: float | None = None, ref: float = 0.0) -> np.ndarray:
    """Basis of ``{v : Mv = 0}`` as the columns of a matrix.

    On exact backends the basis is the standard RREF one, so the rows of the
    free variables form an identity block.  On floats it is orthonormal.
    """
    field = field_of(M)
    n = M.shape[1]
    if not field.exact:
        if M.shape[0] == 0:
            return np.eye(n, dtype=M.dtype)
        r = numerical_rank(M, tol, ref)
        _, _, vh = np.linalg.svd(M)
        return vh[r:].conj().T.copy()
    rows, pivots = _rref(_exact_rows(M)) if M.shape[0] else ([], [])
    free = [c for c in range(n) if c not in set(pivots)]
    out = zeros(n, len(free), field)
    for k, f in enumerate(free):
        out[f, k] = field.one
        for i, p in enumerate(pivots):
            out[p, k] = -rows[i][f] if field == RATIONAL else field.convert(-rows[i][f])
    return out


def inverse(M: np.ndarray) -> np.ndarray:
    if not is_square(M):
        raise PreconditionError("inverse of a non-square matrix")
    field = field_of(M)
    n = M.shape[0]
    if not field.exact:
        if numerical_rank(M) < n:
            raise PreconditionError("matrix is singular")
        return np.linalg.inv(M)
    aug = np.concatenate([M, identity(n, field)], axis=1)
    rows, pivots = _rref(_exact_rows(aug))
    if pivots[:n] != list(range(n)):
        raise PreconditionError("matrix is singular")
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        out[i, :] = rows[i][n:]
    return out


def solve(M: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``M X = B`` for square nonsingular ``M``."""
    return mul(inverse(M), B)


def inertia(M: np.ndarray, tol: float | None = None) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` counts of a symmetric or Hermitian matrix."""
    if not is_square(M):
        raise PreconditionError("inertia of a non-square matrix")
    field = field_of(M)
    n = M.shape[0]
    if n == 0:
        return (0, 0, 0)
    if not field.exact:
        w = np.linalg.eigvalsh(M)
        eps = get_tolerance() if tol is None else tol
        thresh = eps * max(1.0, float(np.max(np.abs(w))))
        pos = int(np.sum(w > thresh))
        neg = int(np.sum(w < -thresh))
        return pos, neg, n - pos - neg
    if field == GAUSSIAN:
        p, q, z = inertia(_realify(M))
        return p // 2, q // 2, z // 2
    return _symmetric_inertia([[to_rational(x) for x in r] for r in M.tolist()])


def _symmetric_inertia(a: list[list]) -> tuple[int, int, int]:
    """Sylvester inertia of a rational symmetric matrix by congruence elimination."""
    n = len(a)
    active = list(range(n))
    pos = neg = 0
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j makes the diagonal entry 2*a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        row = a[piv]
        for k in active:
            f = a[k][piv]
            if f:
                f = f / d
                rk = a[k]
                for j in active:
                    rk[j] -= f * row[j]
        for k in active:
            a[k][piv] = mpq(0)
            a[piv][k] = mpq(0)
    return pos, neg, n - pos - neg


# ---------------------------------------------------------------------------
# direct sums


def direct_sum(Ms: Sequence[np.ndarray]) -> np.ndarray:
    """Block-diagonal matrix ``M_1 ⊕ ... ⊕ M_k``."""
    Ms = list(Ms)
    if not Ms:
        return zeros(0, 0, RATIONAL)
    fields = [field_of(M) for M in Ms]
    f = fields[0]
    for g in fields[1:]:
        f = _join_fields(f, g)
    rows = sum(M.shape[0] for M in Ms)
    cols = sum(M.shape[1] for M in Ms)
    out = zeros(rows, cols, f)
    r = c = 0
    for M in Ms:
        out[r : r + M.shape[0], c : c + M.shape[1]] = convert(M, f) if f.exact else M
        r += M.shape[0]
        c += M.shape[1]
    return out


def block_direct_order(half_sizes: Sequence[int]) -> list[int]:
    """Index map from ``⊞`` order to ``⊕`` order.

    Position ``k`` of the block-direct sum holds index ``order[k]`` of the
    plain direct sum of matrices of sizes ``2*n_i``.
    """
    offsets = []
    pos = 0
    for n in half_sizes:
        offsets.append(pos)
        pos += 2 * n
    first = [off + j for off, n in zip(offsets, half_sizes) for j in range(n)]
    second = [off + n + j for off, n in zip(offsets, half_sizes) for j in range(n)]
    return first + second


def _half_sizes(Ms: Sequence[np.ndarray]) -> list[int]:
    sizes = []
    for M in Ms:
        if not is_square(M) or M.shape[0] % 2:
            raise PreconditionError(f"block-direct summands must be square of even size, got {M.shape}")
        sizes.append(M.shape[0] // 2)
    return sizes


def block_direct_sum(Ms: Sequence[np.ndarray]) -> np.ndarray:
    """Quadrant-wise direct sum of ``2n_i x 2n_i`` matrices."""
    Ms = list(Ms)
    order = block_direct_order(_half_sizes(Ms))
    D = direct_sum(Ms)
    return D[np.ix_(order, order)]


def permutation_matrix(order: Sequence[int], field=RATIONAL) -> np.ndarray:
    """``P`` with ``P[order[k], k] = 1``, so that ``(P.T X P)[k, l] = X[order[k], order[l]]``."""
    field = get_field(field)
    n = len(order)
    P = zeros(n, n, field)
    for k, o in enumerate(order):
        P[o, k] = field.one
    return P


# ---------------------------------------------------------------------------
# matrix pairs


def _frozen(M: np.ndarray) -> np.ndarray:
    M = M.copy()
    M.flags.writeable = False
    return M


@dataclass(frozen=True, eq=False)
class MatrixPair:
    """A symmetric ``A`` and a nonsingular skew-symmetric ``B`` of the same even size."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A, B = self.A, self.B
        if not (is_square(A) and is_square(B)) or A.shape != B.shape:
            raise PreconditionError(f"A and B must be square of equal size, got {A.shape} and {B.shape}")
        if A.shape[0] % 2:
            raise PreconditionError(f"matrix pairs must have even size, got {A.shape[0]}")
        if not is_symmetric(A):
            raise PreconditionError("A is not symmetric")
        if not is_skew_symmetric(B):
            raise PreconditionError("B is not skew-symmetric")
        if rank(B) < B.shape[0]:
            raise PreconditionError("B is singular")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "B", _frozen(B))

    @property
    def size(self) -> int:
        return self.A.shape[0]

    @property
    def field(self) -> Field:
        return _join_fields(field_of(self.A), field_of(self.B))

    def __eq__(self, other):
        if not isinstance(other, MatrixPair):
            return NotImplemented
        return matrices_equal(self.A, other.A) and matrices_equal(self.B, other.B)

    __hash__ = None


def _symmetrize(M: np.ndarray, skew: bool = False) -> np.ndarray:
    if M.dtype.kind == "O":
        return M
    return (M - M.T) / 2 if skew else (M + M.T) / 2


def congruence(S: np.ndarray, pair: MatrixPair) -> MatrixPair:
    """``(S^T A S, S^T B S)`` for nonsingular ``S``."""
    if not is_square(S) or S.shape[0] != pair.size:
        raise PreconditionError(f"transform of shape {S.shape} does not fit a pair of size {pair.size}")
    if rank(S) < S.shape[0]:
        raise PreconditionError("congruence transform is singular")
    A = mul(S.T, pair.A, S)
    B = mul(S.T, pair.B, S)
    return MatrixPair(_symmetrize(A), _symmetrize(B, skew=True))


def permutation_congruent_rearrange(pairs: Sequence[MatrixPair]) -> tuple[MatrixPair, np.ndarray]:
    """Turn ``⊕(M_i, Ω_{n_i})`` into ``(⊞M_i, Ω_{Σn_i})``.

    Returns the rearranged pair and the permutation matrix ``Π`` with
    ``Π^T (⊕ M_i) Π = ⊞ M_i`` and ``Π^T (⊕ Ω_{n_i}) Π = Ω``.
    """
    pairs = list(pairs)
    if not pairs:
        raise PreconditionError("no pairs to rearrange")
    halves = []
    for p in pairs:
        n = p.size // 2
        if not matrices_equal(p.B, omega(n, field_of(p.B))):
            raise PreconditionError("B-part is not the standard symplectic form")
        halves.append(n)
    order = block_direct_order(halves)
    field = pairs[0].field
    Pi = permutation_matrix(order, field)
    A = direct_sum([p.A for p in pairs])[np.ix_(order, order)]
    return MatrixPair(A, omega(sum(halves), field_of(A))), Pi


# ---------------------------------------------------------------------------
# JSON


_FIELD_NAMES = {"rational", "gaussian", "real", "complex"}


def matrix_to_json(M: np.ndarray) -> dict:
    """``{"field": ..., "rows": [[entry, ...], ...]}``."""
    return {"field": field_of(M).name, "rows": [[scalar_to_json(x) for x in r] for r in M.tolist()]}


def matrix_from_json(obj, field=None) -> np.ndarray:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "rows" not in obj:
        raise PreconditionError("matrix JSON must be an object with a 'rows' array")
    name = field or obj.get("field", "rational")
    if isinstance(name, Field):
        name = name.name
    if name not in _FIELD_NAMES:
        raise PreconditionError(f"unknown field {name!r}")
    rows = obj["rows"]
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise PreconditionError("'rows' must be a list of lists")
    if rows and len({len(r) for r in rows}) != 1:
        raise PreconditionError("ragged rows")
    f = get_field(name)
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=f.dtype)
    try:
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                out[i, j] = scalar_from_json(v, f)
    except (TypeError, ValueError, KeyError) as exc:
        raise PreconditionError(f"bad matrix entry: {exc}") from None
    return out
