"""Constructors for the named canonical blocks and the structural predicates.

Every constructor is written as an explicit index formula.  The formulas are
pinned down by the structural identities checked in ``verify.py`` and the
test-suite (characteristic polynomials, ranks, nilpotency, similarities).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from dataclasses import field as dc_field

import numpy as np

from .errors import PreconditionError
from .matrices import (
    MatrixPair,
    field_of,
    identity,
    inverse,
    is_skew_symmetric,
    is_square,
    is_symmetric,
    matrices_equal,
    matrix_power,
    mul,
    omega,
    rank,
    scale,
    zeros,
)
from .polynomials import Polynomial, char_poly, factor_exact, is_irreducible, poly_is_even
from .scalars import RATIONAL, REAL, Field, backend_of, get_field, get_tolerance

BLOCK_KINDS = ("J", "JR", "F", "Omega", "P", "Pp", "Q", "Qp")


def _field_for(params, field) -> Field:
    if field is not None:
        return get_field(field)
    f = RATIONAL
    for p in params:
        if p is None:
            continue
        b = backend_of(p)
        if not b.exact:
            return b
        f = b if b.is_complex else f
    return f


@dataclass(frozen=True)
class BlockSpec:
    """Parameters of a named block.

    ``n`` is the size parameter as it appears in the block's name: ``J_n(a)``
    is ``n x n`` while ``P_n``, ``Q_n(c)``, ``Omega_n`` and the realified
    ``J_n(a+bi)`` are ``2n x 2n``.  For Frobenius blocks ``poly`` is the
    irreducible ``p`` and ``power`` is ``s``; ``n`` is then ignored.
    """

    kind: str
    n: int = 1
    a: object = None
    b: object = None
    c: object = None
    poly: Polynomial | None = None
    power: int = 1
    sign: int = 1
    field: object = None

    def __post_init__(self):
        if self.kind not in BLOCK_KINDS:
            raise PreconditionError(f"unknown block kind {self.kind!r}; expected one of {BLOCK_KINDS}")
        if self.kind != "F" and (not isinstance(self.n, (int, np.integer)) or self.n < 1):
            raise PreconditionError(f"size parameter must be a positive integer, got {self.n!r}")
        if self.sign not in (1, -1):
            raise PreconditionError(f"sign must be +1 or -1, got {self.sign!r}")
        if self.kind == "JR":
            if self.a is None or self.b is None:
                raise PreconditionError("realified Jordan block needs a and b")
            if not self.b > 0:
                raise PreconditionError("realified Jordan block needs b > 0")
        if self.kind in ("Q", "Qp"):
            if self.c is None or not self.c > 0:
                raise PreconditionError(f"{self.kind} block needs c > 0")
        if self.kind == "J" and self.a is None:
            object.__setattr__(self, "a", 0)
        if self.kind == "F":
            if self.poly is None or self.poly.degree < 1:
                raise PreconditionError("Frobenius block needs a non-constant polynomial")
            if self.poly.leading != 1:
                raise PreconditionError("Frobenius block polynomial must be monic")
            if self.power < 1:
                raise PreconditionError("Frobenius block power must be >= 1")

    @property
    def size(self) -> int:
        if self.kind == "J":
            return self.n
        if self.kind == "F":
            return self.poly.degree * self.power
        return 2 * self.n

    def resolved_field(self) -> Field:
        params = [self.a, self.b, self.c]
        if self.poly is not None:
            params += list(self.poly.coeffs)
        return _field_for(params, self.field)


# ---------------------------------------------------------------------------
# individual blocks


def jordan(n: int, a=0, field=None) -> np.ndarray:
    f = _field_for([a], field)
    M = zeros(n, n, f)
    a = f.convert(a)
    for i in range(n):
        M[i, i] = a
        if i + 1 < n:
            M[i, i + 1] = f.one
    return M


def realified_jordan(n: int, a, b, field=None) -> np.ndarray:
    """``J_n(a+bi)`` realified: blocks ``[[a, b], [-b, a]]`` with ``I_2`` above the diagonal."""
    f = _field_for([a, b], field)
    a, b = f.convert(a), f.convert(b)
    M = zeros(2 * n, 2 * n, f)
    for k in range(n):
        i = 2 * k
        M[i, i] = M[i + 1, i + 1] = a
        M[i, i + 1] = b
        M[i + 1, i] = -b
        if k + 1 < n:
            M[i, i + 2] = M[i + 1, i + 3] = f.one
    return M


def frobenius(poly: Polynomial, power: int = 1, field=None) -> np.ndarray:
    """Companion matrix of ``poly**power``: ones below the diagonal, negated coefficients in the last column."""
    q = poly**power
    f = _field_for(list(q.coeffs), field)
    n = q.degree
    M = zeros(n, n, f)
    for i in range(n):
        if i > 0:
            M[i, i - 1] = f.one
        M[i, n - 1] = f.convert(-q[i])
    return M


def p_block(n: int, field=RATIONAL) -> np.ndarray:
    """``P_n``: anti-identity top-left, ones just below the anti-diagonal bottom-right."""
    f = get_field(field)
    M = zeros(2 * n, 2 * n, f)
    for i in range(n):
        M[i, n - 1 - i] = f.one
    for i in range(1, n):
        M[n + i, n + n - i] = f.one
    return M


def _c_block(c, f: Field) -> np.ndarray:
    C = zeros(2, 2, f)
    C[0, 1] = f.one
    C[1, 0] = -(c * c)
    return C


def q_block(n: int, c, field=None) -> np.ndarray:
    """``Q_n(c)``; odd and even n use different layouts."""
    f = _field_for([c], field)
    c = f.convert(c)
    M = zeros(2 * n, 2 * n, f)
    if n % 2:
        for i in range(n):
            s = c if i % 2 == 0 else -c
            M[i, n - 1 - i] = s
            M[n + i, n + n - 1 - i] = s
            if i + 1 < n:
                M[i, n + i + 1] = f.one
                M[n + i + 1, i] = f.one
        return M
    C = _c_block(c, f)
    for k in range(n // 2):
        r = 2 * k
        M[r : r + 2, n + r : n + r + 2] = C
        M[n + r : n + r + 2, r : r + 2] = C.T
        if k + 1 < n // 2:
            M[r : r + 2, n + r + 2 : n + r + 4] = identity(2, f)
            M[n + r + 2 : n + r + 4, r : r + 2] = identity(2, f)
    M[n, n] = M[n + 1, n + 1] = f.one
    return M


def p_prime_block(n: int, field=RATIONAL) -> np.ndarray:
    """``P'_n``: ``J_n(0)`` top-right, its transpose bottom-left and a single one at the start of the bottom-right quadrant."""
    f = get_field(field)
    M = zeros(2 * n, 2 * n, f)
    for i in range(n - 1):
        M[i, n + i + 1] = f.one
        M[n + i + 1, i] = f.one
    M[n, n] = f.one
    return M


def q_prime_block(n: int, c, field=None) -> np.ndarray:
    """``Q'_n(c)``; equal to ``Q_n(c)`` for even ``n``."""
    if n % 2 == 0:
        return q_block(n, c, field)
    f = _field_for([c], field)
    c = f.convert(c)
    M = zeros(2 * n, 2 * n, f)
    C = _c_block(c, f)
    M[0, 0] = c * c
    M[n, n] = f.one
    if n > 1:
        M[0, n + 2] = f.one
        M[n + 2, 0] = f.one
        M[n, n + 1] = M[n + 1, n] = f.one
    for k in range((n - 1) // 2):
        r = 1 + 2 * k
        M[r : r + 2, n + r : n + r + 2] = C
        M[n + r : n + r + 2, r : r + 2] = C.T
        if k + 1 < (n - 1) // 2:
            M[r : r + 2, n + r + 2 : n + r + 4] = identity(2, f)
            M[n + r + 2 : n + r + 4, r : r + 2] = identity(2, f)
    return M


def make_block(spec: BlockSpec) -> np.ndarray:
    """The matrix named by ``spec``, multiplied by ``spec.sign``."""
    k = spec.kind
    f = spec.resolved_field()
    if k == "J":
        M = jordan(spec.n, spec.a, f)
    elif k == "JR":
        M = realified_jordan(spec.n, spec.a, spec.b, f)
    elif k == "F":
        if f.exact:
            if not is_irreducible(spec.poly):
                raise PreconditionError(f"{spec.poly} is not irreducible")
        else:
            warnings.warn("irreducibility of a floating polynomial is not checked", stacklevel=2)
        M = frobenius(spec.poly, spec.power, f)
    elif k == "Omega":
        M = omega(spec.n, f)
    elif k == "P":
        M = p_block(spec.n, f)
    elif k == "Pp":
        M = p_prime_block(spec.n, f)
    elif k == "Q":
        M = q_block(spec.n, spec.c, f)
    else:
        M = q_prime_block(spec.n, spec.c, f)
    return M if spec.sign == 1 else scale(M, -1)


# ---------------------------------------------------------------------------
# pairs


@dataclass(frozen=True, eq=False)
class TildePsi:
    """``Psi`` together with a nonsingular skew ``tilde`` making ``tilde @ Psi`` symmetric."""

    psi: np.ndarray
    tilde: np.ndarray
    notes: tuple = dc_field(default=())

    def __post_init__(self):
        psi, t = self.psi, self.tilde
        if not (is_square(psi) and is_square(t)) or psi.shape != t.shape:
            raise PreconditionError("Psi and its tilde must be square of the same size")
        if not is_skew_symmetric(t):
            raise PreconditionError("tilde is not skew-symmetric")
        if rank(t) < t.shape[0]:
            raise PreconditionError("tilde is singular")
        if not is_symmetric(mul(t, psi)):
            raise PreconditionError("tilde @ Psi is not symmetric")


def make_pair_type_i(phi: np.ndarray) -> MatrixPair:
    """``([[0, Phi], [Phi^T, 0]], Omega_n)``."""
    if not is_square(phi):
        raise PreconditionError("Phi must be square")
    n = phi.shape[0]
    f = field_of(phi)
    A = zeros(2 * n, 2 * n, f)
    A[:n, n:] = phi
    A[n:, :n] = phi.T
    return MatrixPair(A, omega(n, f))


def _p_of(psi: np.ndarray) -> Polynomial | None:
    if not field_of(psi).exact:
        return None
    factors = factor_exact(char_poly(psi))
    if len(factors) != 1:
        raise PreconditionError("characteristic polynomial of Psi is not a power of one irreducible")
    return factors[0][0]


def make_pair_type_ii(t: TildePsi, f: Polynomial) -> MatrixPair:
    """``(tilde Psi f(Psi), tilde f(Psi))`` for nonzero even ``f`` of degree below ``deg p_Psi``."""
    if not f:
        raise PreconditionError("f must be nonzero")
    if not poly_is_even(f):
        raise PreconditionError("f must be a polynomial in x^2")
    p = _p_of(t.psi)
    if p is not None and f.degree >= p.degree:
        raise PreconditionError(f"deg f = {f.degree} must be below deg p = {p.degree}")
    fpsi = f.evaluate_matrix(t.psi)
    tf = mul(t.tilde, fpsi)
    return MatrixPair(mul(t.tilde, t.psi, fpsi), tf)


# ---------------------------------------------------------------------------
# predicates


def _check_even(M: np.ndarray, what: str) -> int:
    if not is_square(M) or M.shape[0] % 2:
        raise PreconditionError(f"{what} needs a square matrix of even size, got {M.shape}")
    return M.shape[0] // 2


def is_symplectic(S: np.ndarray, tol: float | None = None) -> bool:
    n = _check_even(S, "is_symplectic")
    W = omega(n, RATIONAL if field_of(S).exact else REAL)
    return matrices_equal(mul(S.T, W, S), W, tol)


def is_hamiltonian(H: np.ndarray, tol: float | None = None) -> bool:
    n = _check_even(H, "is_hamiltonian")
    W = omega(n, RATIONAL if field_of(H).exact else REAL)
    return is_symmetric(mul(W, H), tol)


def _default_kind(M: np.ndarray) -> str:
    f = field_of(M)
    if f.exact:
        return "general"
    return "closed" if f.is_complex else "real"


def _is_power_of(chi: Polynomial, p: Polynomial, exact: bool) -> bool:
    if p.degree < 1 or chi.degree % p.degree:
        return False
    target = p.monic() ** (chi.degree // p.degree)
    if exact:
        return chi == target
    eps = get_tolerance()
    scale_ = max(1.0, max(abs(complex(c)) for c in target.coeffs))
    return all(abs(complex(chi[k]) - complex(target[k])) <= 1e3 * eps * scale_ for k in range(chi.degree + 1))


def tilde_exists(psi: np.ndarray, p: Polynomial, kind: str | None = None) -> bool:
    """Whether ``Psi`` admits a ``tilde``.

    ``kind`` selects the rule: ``"general"`` (``p = x`` or ``p`` even),
    ``"closed"`` (``p = x``) or ``"real"`` (``p = x`` or ``p = x^2 + b``
    with ``b > 0``).  It defaults from the backend: exact backends use the
    general rule, real floats the real rule and complex floats the closed one.
    """
    if not is_square(psi):
        raise PreconditionError("Psi must be square")
    exact = field_of(psi).exact
    if not _is_power_of(char_poly(psi), p, exact):
        raise PreconditionError(f"characteristic polynomial of Psi is not a power of {p}")
    kind = kind or _default_kind(psi)
    if psi.shape[0] % 2:
        return False
    p = p.monic()
    is_x = p.degree == 1 and p[0] == 0
    if kind == "closed":
        return is_x
    if kind == "real":
        return is_x or (p.degree == 2 and p[1] == 0 and p[0] > 0)
    if kind == "general":
        return is_x or poly_is_even(p)
    raise ValueError(f"unknown field kind {kind!r}")


def alternating_antidiagonal(n: int, field=RATIONAL) -> np.ndarray:
    """``Z`` with ``Z[i, n-1-i] = (-1)**i``."""
    f = get_field(field)
    Z = zeros(n, n, f)
    for i in range(n):
        Z[i, n - 1 - i] = f.one if i % 2 == 0 else -f.one
    return Z


def make_tilde_nilpotent(psi: np.ndarray) -> TildePsi:
    """``tilde = S^T Z S`` where ``Psi = S^{-1} J_n(0) S`` and ``Z`` is the alternating anti-diagonal."""
    if not is_square(psi):
        raise PreconditionError("Psi must be square")
    n = psi.shape[0]
    if n % 2:
        raise PreconditionError("a nilpotent Psi with a tilde must have even size")
    f = field_of(psi)
    top = matrix_power(psi, n - 1)
    if not matrices_equal(mul(top, psi), zeros(n, n, f)):
        raise PreconditionError("Psi is not nilpotent")
    if rank(psi) != n - 1:
        raise PreconditionError("Psi has more than one Jordan block")
    # first standard basis vector outside ker Psi^(n-1)
    scale_ = max(1.0, float(np.max(np.abs(top.astype(complex))))) if not f.exact else 0
    j = next(
        j
        for j in range(n)
        if any((x != 0) if f.exact else abs(x) > get_tolerance() * scale_ for x in top[:, j])
    )
    v = zeros(n, 1, f)
    v[j, 0] = f.one
    cols = [v]
    for _ in range(n - 1):
        cols.append(mul(psi, cols[-1]))
    M = np.concatenate(cols[::-1], axis=1)
    S = inverse(M)
    tilde = mul(S.T, alternating_antidiagonal(n, f), S)
    if not f.exact:
        tilde = (tilde - tilde.T) / 2
    return TildePsi(psi, tilde)


def canonical_tilde_representatives(n: int, kind: str = "closed", cs=(1,), field=RATIONAL) -> list[TildePsi]:
    """``(-Omega_n P_n, Omega_n)`` and, for real-like fields, ``(-Omega_n Q_n(c), Omega_n)`` per ``c``."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    f = get_field(field)
    W = omega(n, f)
    out = [TildePsi(scale(mul(W, p_block(n, f)), -1), W)]
    if kind == "real":
        for c in cs:
            out.append(TildePsi(scale(mul(W, q_block(n, c, f)), -1), W))
    elif kind != "closed":
        raise ValueError(f"unknown field kind {kind!r}")
    return out


def hyperbolic_phi(n: int, a=0, b=None, field=None) -> np.ndarray:
    """``Phi`` of a hyperbolic summand: ``J_n(a)``, or the realified ``J_{n/2}(a+bi)`` when ``b`` is given."""
    if b is None:
        return jordan(n, a, field)
    if n % 2:
        raise PreconditionError("realified hyperbolic blocks need even n")
    return realified_jordan(n // 2, a, b, field)


__all__ = [
    "BLOCK_KINDS",
    "BlockSpec",
    "TildePsi",
    "alternating_antidiagonal",
    "canonical_tilde_representatives",
    "frobenius",
    "hyperbolic_phi",
    "is_hamiltonian",
    "is_symplectic",
    "jordan",
    "make_block",
    "make_pair_type_i",
    "make_pair_type_ii",
    "make_tilde_nilpotent",
    "p_block",
    "p_prime_block",
    "q_block",
    "q_prime_block",
    "realified_jordan",
    "tilde_exists",
]
