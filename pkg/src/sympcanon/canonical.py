"""Canonical forms of symmetric forms on a symplectic space.

A symmetric ``A`` of size ``2m`` is studied through the Hamiltonian matrix
``H = Omega_m A``; symplectic congruence ``A -> S^T A S`` is similarity
``H -> S^{-1} H S``.  The canonical summands are read off the eigenvalue
classes of ``H``:

* zero eigenvalue: even Jordan blocks give ``±P_k``, odd ones pair up into
  hyperbolic summands with ``J_k(0)``;
* real ``±r`` (and complex ``λ, -λ`` on the complex path): hyperbolic ``J_k(r)``;
* quartets ``±a ± bi`` with ``a > 0``: hyperbolic realified blocks;
* imaginary ``±ci``: ``±Q_k(c)``.

Signs of ``P`` and ``Q`` summands are the inertia of real symmetric forms
built from ``Omega`` and powers of ``H``, calibrated once against the
canonical blocks themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .blocks import hyperbolic_phi, is_hamiltonian, p_block, q_block
from .errors import IndeterminateError, PreconditionError, UnsupportedSpectrum
from .matrices import (
    MatrixPair,
    block_direct_order,
    block_direct_sum,
    convert,
    direct_sum,
    field_of,
    identity,
    inertia,
    is_skew_symmetric,
    is_square,
    is_symmetric,
    matrices_equal,
    matrix_power,
    mul,
    nullspace,
    omega,
    rank,
    scale,
    zeros,
)
from .polynomials import Polynomial
from .scalars import (
    COMPLEX,
    GAUSSIAN,
    RATIONAL,
    REAL,
    GaussianRational,
    QuadraticNumber,
    backend_of,
    exact_sign,
    get_field,
    get_tolerance,
    scalar_to_json,
    sqrt_exact,
)
from .spectra import cluster_eigenvalues, primary_structure, roots_of

PARAM_TOL = 1e-6
KIND_ORDER = {"hyperbolic": 0, "P": 1, "Q": 2}


# ---------------------------------------------------------------------------
# summands


def _is_exact(x) -> bool:
    return x is None or backend_of(x).exact


def _as_float(x):
    if x is None:
        return None
    z = complex(x)
    return z if z.imag else z.real


def _param_close(x, y, tol) -> bool:
    if x is None or y is None:
        return x is None and y is None
    if _is_exact(x) and _is_exact(y):
        return x == y
    return abs(complex(x) - complex(y)) <= tol * max(1.0, abs(complex(x)))


@dataclass(frozen=True, eq=False)
class Summand:
    """One canonical summand.

    ``kind`` is ``"hyperbolic"`` (``[[0, Phi], [Phi^T, 0]]`` with ``Phi = J_n(a)``
    or, when ``b`` is set, the realified ``J_{n/2}(a+bi)``), ``"P"`` or ``"Q"``.
    Every summand is a ``2n x 2n`` matrix.
    """

    kind: str
    n: int
    sign: int = 1
    a: object = None
    b: object = None
    c: object = None

    def __post_init__(self):
        if self.kind not in KIND_ORDER:
            raise PreconditionError(f"unknown summand kind {self.kind!r}")
        if self.n < 1:
            raise PreconditionError("summand size must be positive")
        if self.sign not in (1, -1):
            raise PreconditionError("sign must be +1 or -1")
        if self.kind == "hyperbolic":
            if self.a is None:
                raise PreconditionError("hyperbolic summand needs a")
            if self.sign != 1:
                raise PreconditionError("hyperbolic summands carry no sign")
            if self.b is not None and (self.n % 2 or not self.b > 0):
                raise PreconditionError("realified hyperbolic summand needs even n and b > 0")
        if self.kind == "Q" and (self.c is None or not self.c > 0):
            raise PreconditionError("Q summand needs c > 0")

    @property
    def size(self) -> int:
        return 2 * self.n

    @property
    def realified(self) -> bool:
        return self.b is not None

    def _field(self, field=None):
        if field is not None:
            return get_field(field)
        params = [x for x in (self.a, self.b, self.c) if x is not None]
        if not all(_is_exact(x) and not (isinstance(x, QuadraticNumber) and not isinstance(x, GaussianRational) and x.coef != 0) for x in params):
            return COMPLEX if any(complex(x).imag for x in params) else REAL
        if any(isinstance(x, GaussianRational) or backend_of(x) == GAUSSIAN for x in params):
            return GAUSSIAN
        return RATIONAL

    def _num(self, x, field):
        return field.convert(_as_float(x)) if not field.exact else field.convert(x)

    def phi(self, field=None) -> np.ndarray:
        f = self._field(field)
        b = None if self.b is None else self._num(self.b, f)
        return hyperbolic_phi(self.n, self._num(self.a, f), b, f)

    def block(self, field=None) -> np.ndarray:
        """The ``A``-side matrix of the summand."""
        f = self._field(field)
        if self.kind == "hyperbolic":
            ph = self.phi(f)
            M = zeros(2 * self.n, 2 * self.n, f)
            M[: self.n, self.n :] = ph
            M[self.n :, : self.n] = ph.T
            return M
        M = p_block(self.n, f) if self.kind == "P" else q_block(self.n, self._num(self.c, f), f)
        return M if self.sign == 1 else scale(M, -1)

    def hamiltonian_block(self, field=None) -> np.ndarray:
        """The Hamiltonian image: ``[[Phi, 0], [0, -Phi^T]]``, ``±Omega P_n`` or ``±Omega Q_n(c)``."""
        f = self._field(field)
        if self.kind == "hyperbolic":
            ph = self.phi(f)
            return direct_sum([ph, scale(ph.T, -1)])
        return mul(omega(self.n, f), self.block(f))

    def negated(self) -> "Summand":
        if self.kind == "hyperbolic":
            return self
        return Summand(self.kind, self.n, -self.sign, self.a, self.b, self.c)

    def params(self) -> dict:
        out = {}
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out

    def sort_key(self):
        def fkey(x):
            if x is None:
                return (0.0, 0.0)
            z = complex(x)
            return (round(z.real, 9), round(z.imag, 9))

        return (KIND_ORDER[self.kind], self.n, -self.sign, fkey(self.a), fkey(self.b), fkey(self.c))

    def matches(self, other: "Summand", tol: float = PARAM_TOL, pm: bool = False) -> bool:
        if (self.kind, self.n, self.sign, self.realified) != (other.kind, other.n, other.sign, other.realified):
            return False
        ok_a = _param_close(self.a, other.a, tol)
        if not ok_a and pm and self.a is not None and other.a is not None:
            ok_a = _param_close(-self.a, other.a, tol)
        return ok_a and _param_close(self.b, other.b, tol) and _param_close(self.c, other.c, tol)

    def __eq__(self, other):
        # exact parameters compare exactly; floats are left to matches()
        if not isinstance(other, Summand):
            return NotImplemented
        return (self.kind, self.n, self.sign, self.a, self.b, self.c) == (
            other.kind,
            other.n,
            other.sign,
            other.a,
            other.b,
            other.c,
        )

    def __hash__(self):
        return hash((self.kind, self.n, self.sign, self.realified))

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "n": self.n,
            "sign": self.sign,
            "params": {k: scalar_to_json(v) for k, v in self.params().items()},
        }

    def __str__(self):
        if self.kind == "hyperbolic":
            if self.realified:
                return f"H[J_{self.n // 2}({self.a}+{self.b}i)^R]"
            return f"H[J_{self.n}({self.a})]"
        s = "+" if self.sign == 1 else "-"
        return f"{s}P_{self.n}" if self.kind == "P" else f"{s}Q_{self.n}({self.c})"

    __repr__ = __str__


def multisets_match(xs, ys, tol: float = PARAM_TOL, pm: bool = False) -> bool:
    left = list(ys)
    if len(xs) != len(left):
        return False
    for s in xs:
        k = next((i for i, t in enumerate(left) if s.matches(t, tol, pm)), None)
        if k is None:
            return False
        left.pop(k)
    return True


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A multiset of canonical summands with an optional transform certificate.

    ``kind`` is ``"real"`` or ``"complex"`` (which list of summands is used);
    ``form`` is ``"symmetric"`` for forms and ``"hamiltonian"`` for
    Hamiltonian matrices.  With a certificate ``S``, ``S^T A S`` (or
    ``S^{-1} H S``) equals :meth:`assemble` up to ``residual``.
    """

    summands: tuple
    kind: str = "real"
    form: str = "symmetric"
    certificate: np.ndarray | None = None
    residual: float | None = None
    notes: tuple = dc_field(default=())

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(sorted(self.summands, key=Summand.sort_key)))

    @property
    def size(self) -> int:
        return sum(s.size for s in self.summands)

    def assemble(self, field=None) -> np.ndarray:
        if not self.summands:
            return zeros(0, 0, field or RATIONAL)
        field = field or _common_field(self.summands)
        if self.form == "hamiltonian":
            return block_direct_sum([s.hamiltonian_block(field) for s in self.summands])
        return block_direct_sum([s.block(field) for s in self.summands])

    def negated(self) -> "Decomposition":
        return Decomposition(tuple(s.negated() for s in self.summands), self.kind, self.form, notes=self.notes)

    def as_hamiltonian(self) -> "Decomposition":
        return Decomposition(self.summands, self.kind, "hamiltonian", notes=self.notes)

    def matches(self, other: "Decomposition", tol: float = PARAM_TOL) -> bool:
        pm = self.kind == "complex" or other.kind == "complex"
        return self.size == other.size and multisets_match(self.summands, other.summands, tol, pm)

    def __eq__(self, other):
        if not isinstance(other, Decomposition):
            return NotImplemented
        return self.matches(other)

    __hash__ = None

    def to_json(self, certificate: bool = True) -> dict:
        from .matrices import matrix_to_json

        out = {
            "size": self.size,
            "kind": self.kind,
            "form": self.form,
            "summands": [s.to_json() for s in self.summands],
            "residual": self.residual,
            "notes": list(self.notes),
        }
        if certificate:
            out["certificate"] = None if self.certificate is None else matrix_to_json(self.certificate)
        return out

    def __str__(self):
        return " ⊞ ".join(str(s) for s in self.summands) or "(empty)"


def _common_field(summands):
    fields = {s._field() for s in summands}
    if COMPLEX in fields or (GAUSSIAN in fields and REAL in fields):
        return COMPLEX
    if REAL in fields:
        return REAL
    if GAUSSIAN in fields:
        return GAUSSIAN
    return RATIONAL


# ---------------------------------------------------------------------------
# basic reductions


def _check_symmetric_even(A: np.ndarray) -> int:
    if not is_square(A) or A.shape[0] % 2:
        raise PreconditionError(f"expected a square matrix of even size, got {A.shape}")
    if not is_symmetric(A):
        raise PreconditionError("A is not symmetric")
    return A.shape[0] // 2


def _omega_like(M: np.ndarray, m: int) -> np.ndarray:
    f = field_of(M)
    return omega(m, f if f.exact else REAL)


def hamiltonian_of_form(A: np.ndarray) -> np.ndarray:
    """``H = Omega_m A``, so that ``-Omega_m H = A``."""
    m = _check_symmetric_even(A)
    return mul(_omega_like(A, m), A)


def form_of_hamiltonian(H: np.ndarray) -> np.ndarray:
    """``A = -Omega_m H``."""
    if not is_square(H) or H.shape[0] % 2:
        raise PreconditionError("Hamiltonian matrices have even size")
    m = H.shape[0] // 2
    A = scale(mul(_omega_like(H, m), H), -1)
    if not field_of(A).exact:
        A = (A + A.T) / 2
    return A


def reduce_skew_to_omega(B: np.ndarray) -> np.ndarray:
    """A nonsingular ``T`` with ``T^T B T = Omega_m`` (symplectic Gram-Schmidt)."""
    if not is_square(B) or B.shape[0] % 2:
        raise PreconditionError(f"expected a square matrix of even size, got {B.shape}")
    if not is_skew_symmetric(B):
        raise PreconditionError("B is not skew-symmetric")
    n = B.shape[0]
    f = field_of(B)
    if rank(B) < n:
        raise PreconditionError("B is singular")
    vecs = [identity(n, f)[:, j : j + 1] for j in range(n)]

    def w(u, v):
        return mul(u.T, B, v)[0, 0]

    es, fs = [], []
    while vecs:
        if f.exact:
            e = vecs[0]
            j = next(j for j in range(1, len(vecs)) if w(e, vecs[j]) != 0)
            i = 0
        else:
            best = (0.0, 0, 1)
            for i_ in range(len(vecs)):
                for j_ in range(i_ + 1, len(vecs)):
                    val = abs(w(vecs[i_], vecs[j_]))
                    if val > best[0]:
                        best = (val, i_, j_)
            _, i, j = best
            e = vecs[i]
        g = vecs[j]
        g = scale(g, 1 / w(e, g)) if f.exact else g / w(e, g)
        rest = [v for k, v in enumerate(vecs) if k not in (i, j)]
        new = []
        for v in rest:
            a, b = w(v, g), w(v, e)
            if f.exact:
                v = v - scale(e, a) + scale(g, b)
            else:
                v = v - a * e + b * g
            new.append(v)
        vecs = new
        es.append(e)
        fs.append(g)
    return np.concatenate(es + fs, axis=1)


# ---------------------------------------------------------------------------
# eigenvalue classes


@dataclass(frozen=True)
class _Class:
    kind: str  # zero | real | imag | quartet | complex
    sizes: tuple
    a: object = None
    b: object = None
    c: object = None
    p: Polynomial | None = None


def _re_im_sign(lam) -> tuple[int, int]:
    if isinstance(lam, GaussianRational):
        return exact_sign(lam.real), exact_sign(lam.imag)
    if isinstance(lam, QuadraticNumber):
        if lam.is_real:
            return lam.sign(), 0
        return exact_sign(lam.re), exact_sign(lam.coef)
    if backend_of(lam).exact:
        return exact_sign(lam), 0
    z = complex(lam)
    return int(np.sign(z.real)), int(np.sign(z.imag))


def _exact_classes(H: np.ndarray, kind: str) -> list[_Class]:
    out = []
    for comp in primary_structure(H):
        p, sizes = comp.p, comp.sizes
        if p.degree > 2:
            raise UnsupportedSpectrum(f"irreducible factor {p} of degree {p.degree} is not supported")
        if kind == "complex":
            for lam in roots_of(p):
                sr, si = _re_im_sign(lam)
                if sr == 0 and si == 0:
                    out.append(_Class("zero", sizes, p=p))
                elif sr > 0 or (sr == 0 and si > 0):
                    out.append(_Class("complex", sizes, a=lam, p=p))
            continue
        if field_of(H) == GAUSSIAN:
            raise PreconditionError("real canonicalization needs a real input")
        if p.degree == 1:
            r = -p[0]
            if r == 0:
                out.append(_Class("zero", sizes, p=p))
            elif r > 0:
                out.append(_Class("real", sizes, a=r, p=p))
            continue
        beta, gamma = p[1], p[0]
        disc = beta * beta - 4 * gamma
        if disc > 0:
            for r in roots_of(p):
                if r > 0:
                    out.append(_Class("real", sizes, a=r, p=p))
            continue
        a = -beta / 2
        b = sqrt_exact(-disc) / 2
        if a == 0:
            out.append(_Class("imag", sizes, c=b, p=p))
        elif a > 0:
            out.append(_Class("quartet", sizes, a=a, b=b, p=p))
    return out


def _float_sizes_or_fail(H, lam, cnt, tol):
    from .spectra import _float_sizes

    return _float_sizes(H, lam, cnt, tol)


def _float_classes(H: np.ndarray, kind: str, tol: float | None) -> list[_Class]:
    """Eigenvalue classes of a floating Hamiltonian matrix.

    Clustering starts at ``10 eps ||H||``.  Eigenvalues of a defective block
    spread like ``eps_mach^(1/k)``, which the rank checks detect; the
    threshold is then widened by decades up to ``1e-3 ||H||``.
    """
    eps = get_tolerance() if tol is None else tol
    norm = max(1.0, float(np.linalg.norm(H, 2)))
    if kind == "real" and np.iscomplexobj(H):
        raise PreconditionError("real canonicalization needs a real input")
    w = np.linalg.eigvals(H)
    thr = 10 * eps * norm
    while True:
        try:
            return _float_classes_at(H, w, kind, tol, thr)
        except IndeterminateError:
            thr *= 10
            if thr > 1e-3 * norm:
                raise


def _float_classes_at(H, w, kind, tol, thr) -> list[_Class]:
    real_input = not np.iscomplexobj(H)
    clusters = cluster_eigenvalues(w, thr, real_input)
    # pair each cluster with its negative
    items = [(z, cnt) for z, cnt in clusters]
    zero = [(z, cnt) for z, cnt in items if abs(z) <= thr]
    rest = [(z, cnt) for z, cnt in items if abs(z) > thr]
    out = []
    used = set()
    for k, (z, cnt) in enumerate(rest):
        if k in used:
            continue
        mate = min((j for j in range(len(rest)) if j != k and j not in used), key=lambda j: abs(rest[j][0] + z), default=None)
        if mate is None or rest[mate][1] != cnt or abs(rest[mate][0] + z) > max(10 * thr, 1e-6 * abs(z)):
            raise IndeterminateError(f"eigenvalue {z:.6g} has no partner {-z:.6g}")
        used.update((k, mate))
        zz = (z - rest[mate][0]) / 2
        rep = zz if (zz.real > thr or (abs(zz.real) <= thr and zz.imag > 0)) else -zz
        sizes = _float_sizes_or_fail(H, rep, cnt, tol)
        if _float_sizes_or_fail(H, -rep, cnt, tol) != sizes:
            raise IndeterminateError(f"Jordan structures at {rep:.6g} and its negative differ")
        if kind == "complex":
            out.append(_Class("complex", sizes, a=rep if not (real_input and abs(rep.imag) <= thr) else rep.real))
            continue
        if abs(rep.imag) <= thr:
            out.append(_Class("real", sizes, a=float(rep.real)))
        elif abs(rep.real) <= thr:
            c = float(abs(rep.imag))
            out.append(_Class("imag", sizes, c=c, p=Polynomial((c * c, 0.0, 1.0))))
        else:
            # the conjugate quartet member appears as a separate pair of clusters
            if rep.imag < 0:
                continue
            out.append(_Class("quartet", sizes, a=float(rep.real), b=float(rep.imag)))
    zcnt = sum(c for _, c in zero)
    if zcnt:
        out.append(_Class("zero", _float_sizes_or_fail(H, 0.0, zcnt, tol), p=Polynomial((0.0, 1.0))))
    return out


def _classes(H: np.ndarray, kind: str, tol=None) -> list[_Class]:
    if field_of(H).exact:
        return _exact_classes(H, kind)
    return _float_classes(H, kind, tol)


# ---------------------------------------------------------------------------
# sign characteristic


def _kernel_of_power(T: np.ndarray, k: int, tol=None, ref: float = 0.0) -> np.ndarray:
    """Basis of ``ker T^k``; floats use the staircase ``ker (I - V V^T) T`` instead of forming ``T^k``.

    ``ref`` is the scale ``T`` was computed at, for ``T`` that cancel to noise.
    """
    if field_of(T).exact:
        return nullspace(matrix_power(T, k))
    tn = max(float(np.linalg.norm(T, 2)) if T.size else 0.0, ref)
    V = np.zeros((T.shape[0], 0), dtype=T.dtype)
    for _ in range(k):
        V = nullspace(T - V @ (V.T @ T), tol, ref=tn)
    return V


def _form_inertia(H: np.ndarray, Om: np.ndarray, T: np.ndarray, k: int, post: np.ndarray, tol=None, expected=None, ref=0.0):
    """Inertia of ``W^T Omega post W`` on ``W = ker T^k``.

    On floats ``expected`` is the rank the Jordan data predicts; the signs are
    read from that many largest eigenvalues, provided a clear gap separates
    them from the rest.
    """
    W = _kernel_of_power(T, k, tol, ref)
    G = mul(W.T, Om, post, W)
    if field_of(G).exact:
        return inertia(G)
    G = (G + G.T) / 2
    if np.iscomplexobj(G):
        raise PreconditionError("sign forms need real input")
    w = np.linalg.eigvalsh(G) if G.size else np.zeros(0)
    w = w[np.argsort(-np.abs(w))]
    r = len(w) if expected is None else expected
    if r > len(w):
        raise IndeterminateError(f"sign form has size {len(w)}; expected rank {r}")
    top = float(np.abs(w[0])) if len(w) else 0.0
    eps = get_tolerance() if tol is None else tol
    small = float(np.abs(w[r])) if r < len(w) else 0.0
    if r and (abs(w[r - 1]) <= max(1e2 * small, max(1e3 * eps, 1e-12) * top)):
        raise IndeterminateError(f"sign form has no clear rank-{r} gap")
    pos = int(np.sum(w[:r] > 0))
    return pos, r - pos, len(w) - r


def _zero_form(H, k, tol=None, expected=None):
    m = H.shape[0] // 2
    Om = _omega_like(H, m)
    return _form_inertia(H, Om, H, k, matrix_power(H, k - 1), tol, expected)


def _imag_form(H, p: Polynomial, k, tol=None, expected=None):
    m = H.shape[0] // 2
    Om = _omega_like(H, m)
    pH = p.evaluate_matrix(H)
    ref = 0.0
    if not field_of(H).exact:
        ref = float(np.linalg.norm(H, 2)) ** 2 + abs(complex(p[0]))
    return _form_inertia(H, Om, pH, k, mul(H, matrix_power(pH, k - 1)), tol, expected, ref)


@lru_cache(maxsize=None)
def _ref_sign_p(j: int) -> int:
    """Sign of the zero-class form on the canonical ``+P_j``."""
    H = mul(omega(j), p_block(j))
    pos, neg, _ = _zero_form(H, 2 * j)
    return 1 if pos else -1


@lru_cache(maxsize=None)
def _ref_sign_q(k: int) -> int:
    """Sign of the imaginary-class form on the canonical ``+Q_k(1)``."""
    H = mul(omega(k), q_block(k, 1))
    pos, neg, _ = _imag_form(H, Polynomial.from_ints([1, 0, 1]), k)
    return 1 if pos else -1


def _count(sizes, k) -> int:
    return sum(1 for s in sizes if s == k)


def _signed_counts(pos, neg, expected_rank, unit, exact) -> tuple[int, int]:
    if pos + neg != expected_rank or pos % unit or neg % unit:
        err = ArithmeticError if exact else IndeterminateError
        raise err(f"sign form has inertia ({pos}, {neg}); expected rank {expected_rank}")
    return pos // unit, neg // unit


def sign_characteristic(H: np.ndarray, A: np.ndarray | None = None, lam=0, tol=None) -> list[tuple[int, int]]:
    """``(block size, sign)`` pairs for the zero class or the class ``±ci`` (pass ``lam = c``).

    For ``lam = 0`` the sizes are the sizes of the ``P``-summands (half the
    Jordan block size); for ``lam = c`` they are the ``Q``-summand sizes.
    """
    if A is not None and not matrices_equal(form_of_hamiltonian(H), A):
        raise PreconditionError("A does not match H")
    if not is_hamiltonian(H):
        raise PreconditionError("H is not Hamiltonian")
    exact = field_of(H).exact
    target = "zero" if lam == 0 else "imag"
    out = []
    for cls in _classes(H, "real", tol):
        if cls.kind != target:
            continue
        if target == "imag" and not (
            cls.c == lam if exact and backend_of(lam).exact else abs(float(cls.c) - abs(complex(lam))) <= PARAM_TOL * max(1, abs(complex(lam)))
        ):
            continue
        out += _class_signs(H, cls, tol)
    return sorted(out)


def _class_signs(H, cls: _Class, tol=None) -> list[tuple[int, int]]:
    exact = field_of(H).exact
    out = []
    for k in sorted(set(cls.sizes)):
        cnt = _count(cls.sizes, k)
        if cls.kind == "zero":
            if k % 2:
                continue
            pos, neg, _ = _zero_form(H, k, tol, cnt)
            ref = _ref_sign_p(k // 2)
            npos, nneg = _signed_counts(pos, neg, cnt, 1, exact)
            size = k // 2
        else:
            pos, neg, _ = _imag_form(H, cls.p, k, tol, 2 * cnt)
            ref = _ref_sign_q(k)
            npos, nneg = _signed_counts(pos, neg, 2 * cnt, 2, exact)
            size = k
        plus, minus = (npos, nneg) if ref == 1 else (nneg, npos)
        out += [(size, 1)] * plus + [(size, -1)] * minus
    return out


def _summands_from_classes(H, classes, kind, tol=None) -> list[Summand]:
    exact = field_of(H).exact
    out = []
    for cls in classes:
        if cls.kind == "zero":
            for k in sorted(set(cls.sizes)):
                cnt = _count(cls.sizes, k)
                if k % 2:
                    if cnt % 2:
                        err = ArithmeticError if exact else IndeterminateError
                        raise err(f"odd zero blocks of size {k} occur {cnt} times")
                    out += [Summand("hyperbolic", k, a=_zero_like(H))] * (cnt // 2)
                elif kind == "complex":
                    out += [Summand("P", k // 2)] * cnt
            if kind == "real":
                out += [Summand("P", size, sign) for size, sign in _class_signs(H, cls, tol)]
        elif cls.kind in ("real", "complex"):
            out += [Summand("hyperbolic", k, a=cls.a) for k in cls.sizes]
        elif cls.kind == "quartet":
            out += [Summand("hyperbolic", 2 * k, a=cls.a, b=cls.b) for k in cls.sizes]
        else:
            out += [Summand("Q", size, sign, c=cls.c) for size, sign in _class_signs(H, cls, tol)]
    return out


def _zero_like(H):
    return RATIONAL.zero if field_of(H).exact else 0.0


# ---------------------------------------------------------------------------
# certificates (floating, semisimple classes)


def _skew_basis(W: np.ndarray, Om: np.ndarray):
    """Symplectic Gram-Schmidt on the columns of ``W`` (an ``omega``-nondegenerate subspace)."""
    vecs = [W[:, j] for j in range(W.shape[1])]
    es, fs = [], []

    def w(u, v):
        return u @ Om @ v

    while vecs:
        best = (0.0, 0, 1)
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                val = abs(w(vecs[i], vecs[j]))
                if val > best[0]:
                    best = (val, i, j)
        val, i, j = best
        if val == 0.0:
            raise IndeterminateError("degenerate symplectic subspace")
        e, g = vecs[i], vecs[j] / w(vecs[i], vecs[j])
        vecs = [v - w(v, g) * e + w(v, e) * g for k, v in enumerate(vecs) if k not in (i, j)]
        es.append(e)
        fs.append(g)
    return es, fs


def _eig_basis(H, lam, dim, tol):
    N = H - lam * np.eye(H.shape[0])
    _, s, vh = np.linalg.svd(N)
    return vh[-dim:].conj().T if dim else np.zeros((H.shape[0], 0))


def _certificate(H: np.ndarray, classes, summands, kind, tol=None):
    """Floating certificate ``S`` with ``S^T A S`` equal to the assembled canonical form.

    Only semisimple classes are handled; returns ``None`` otherwise.
    """
    if any(any(s != 1 for s in cls.sizes) for cls in classes):
        return None
    H = np.asarray(convert(H, COMPLEX if np.iscomplexobj(H) or kind == "complex" else REAL) if H.dtype.kind == "O" else H)
    n2 = H.shape[0]
    m = n2 // 2
    Om = omega(m, REAL)
    is_real = kind == "real"
    pieces: list[tuple[Summand, np.ndarray]] = []
    for cls in classes:
        cnt = len(cls.sizes)
        if cls.kind == "zero":
            W = _eig_basis(H, 0.0, cnt, tol)
            if is_real:
                W = W.real if np.allclose(W.imag, 0) else _real_span(W)
            es, fs = _skew_basis(W, Om)
            for e, g in zip(es, fs):
                pieces.append((Summand("hyperbolic", 1, a=0.0), np.stack([e, g], axis=1)))
        elif cls.kind in ("real", "complex"):
            lam = complex(cls.a)
            U = _eig_basis(H, lam, cnt, tol)
            V0 = _eig_basis(H, -lam, cnt, tol)
            if is_real:
                U, V0 = _real_span(U), _real_span(V0)
            V = V0 @ np.linalg.inv(U.T @ Om @ V0)
            a = float(cls.a) if is_real else cls.a
            for j in range(cnt):
                pieces.append((Summand("hyperbolic", 1, a=a), np.stack([U[:, j], V[:, j]], axis=1)))
        elif cls.kind == "quartet":
            lam = complex(float(cls.a), float(cls.b))
            Z = _eig_basis(H, lam, cnt, tol)
            cols = []
            for j in range(cnt):
                cols += [Z[:, j].real, -Z[:, j].imag]
            U = np.stack(cols, axis=1)
            Y = _eig_basis(H, -lam, cnt, tol)
            V0 = np.concatenate([Y.real, Y.imag], axis=1)
            V = V0 @ np.linalg.inv(U.T @ Om @ V0)
            for j in range(cnt):
                local = np.concatenate([U[:, 2 * j : 2 * j + 2], V[:, 2 * j : 2 * j + 2]], axis=1)
                pieces.append((Summand("hyperbolic", 2, a=float(cls.a), b=float(cls.b)), local))
        else:  # imag, Q_1 summands
            c = float(cls.c)
            A = -Om @ H
            Z = _eig_basis(H, 1j * c, cnt, tol)
            G = Z.conj().T @ A @ Z
            G = (G + G.conj().T) / 2
            g, Qm = np.linalg.eigh(G)
            Z = Z @ Qm
            for j in range(cnt):
                if abs(g[j]) <= 1e-12 * max(1.0, np.max(np.abs(g))):
                    raise IndeterminateError("degenerate Hermitian form on an imaginary eigenspace")
                s = 1 if g[j] > 0 else -1
                z = Z[:, j] * math.sqrt(2 * c / abs(g[j]))
                local = np.stack([z.real, s * z.imag], axis=1)
                pieces.append((Summand("Q", 1, s, c=c), local))
    # order pieces like the sorted summands
    remaining = list(pieces)
    ordered = []
    for s in sorted(summands, key=Summand.sort_key):
        k = next((i for i, (t, _) in enumerate(remaining) if s.matches(t, 1e-6, kind == "complex")), None)
        if k is None:
            return None
        ordered.append(remaining.pop(k)[1])
    halves = [blk.shape[1] // 2 for blk in ordered]
    order = block_direct_order(halves)
    D = np.concatenate(ordered, axis=1)
    S = np.empty_like(D)
    S[:, list(range(D.shape[1]))] = D[:, order]
    return S


def _real_span(U: np.ndarray) -> np.ndarray:
    """A real basis of a conjugation-invariant complex subspace spanned by ``U``."""
    if not np.iscomplexobj(U):
        return U
    k = U.shape[1]
    M = np.concatenate([U.real, U.imag], axis=1)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    return u[:, :k]


def _residual(A, S, canon) -> float:
    A = np.asarray(convert(A, COMPLEX) if A.dtype.kind == "O" else A, dtype=complex)
    canon = np.asarray(convert(canon, COMPLEX) if canon.dtype.kind == "O" else canon, dtype=complex)
    m = A.shape[0] // 2
    Om = omega(m, REAL)
    r1 = np.linalg.norm(S.T @ A @ S - canon) / max(1.0, np.linalg.norm(A))
    r2 = np.linalg.norm(S.T @ Om @ S - Om)
    return float(max(r1, r2))


# ---------------------------------------------------------------------------
# public canonicalization


def _canonicalize(A: np.ndarray, kind: str, tol=None, certificate: bool = True) -> Decomposition:
    _check_symmetric_even(A)
    if kind == "real" and field_of(A).is_complex:
        raise PreconditionError("real canonicalization needs a real symmetric matrix")
    if field_of(A) == GAUSSIAN and all(x.imag == 0 for x in A.flat):
        A = convert(A, RATIONAL)  # rational arithmetic is much faster
    H = hamiltonian_of_form(A)
    classes = _classes(H, kind, tol)
    summands = _summands_from_classes(H, classes, kind, tol)
    notes = []
    S = res = None
    if certificate:
        try:
            S = _certificate(H, classes, summands, kind, tol)
        except (np.linalg.LinAlgError, IndeterminateError) as exc:
            notes.append(f"certificate failed: {exc}")
            S = None
        if S is None and not notes:
            notes.append("no certificate: non-semisimple eigenvalue class")
    dec = Decomposition(tuple(summands), kind, "symmetric", notes=tuple(notes))
    if S is not None:
        res = _residual(A, S, dec.assemble(COMPLEX if kind == "complex" else REAL))
        dec = Decomposition(dec.summands, kind, "symmetric", S, res, dec.notes)
    return dec


def canonicalize_real(A: np.ndarray, tol=None, certificate: bool = True) -> Decomposition:
    """Canonical summands of a real symmetric ``A`` of size ``2m`` under symplectic congruence."""
    return _canonicalize(A, "real", tol, certificate)


def canonicalize_complex(A: np.ndarray, tol=None, certificate: bool = True) -> Decomposition:
    """Canonical summands over an algebraically closed field; ``a`` is normalised to ``Re a > 0`` (then ``Im a > 0``)."""
    return _canonicalize(A, "complex", tol, certificate)


def _default_kind(M: np.ndarray) -> str:
    return "complex" if field_of(M).is_complex else "real"


def canonicalize(A: np.ndarray, kind: str | None = None, tol=None, certificate: bool = True) -> Decomposition:
    return _canonicalize(A, kind or _default_kind(A), tol, certificate)


def canonicalize_pair(pair: MatrixPair, kind: str | None = None, tol=None, certificate: bool = True) -> Decomposition:
    """Canonical form of ``(A, B)``: reduce ``B`` to ``Omega`` then canonicalize ``A``.

    The certificate, when present, is a general nonsingular ``S`` with
    ``S^T A S`` canonical and ``S^T B S = Omega``.
    """
    T = reduce_skew_to_omega(pair.B)
    A1 = mul(T.T, pair.A, T)
    if not field_of(A1).exact:
        A1 = (A1 + A1.T) / 2
    dec = canonicalize(A1, kind or _default_kind(pair.A), tol, certificate)
    if dec.certificate is None:
        return dec
    Tf = np.asarray(convert(T, COMPLEX) if T.dtype.kind == "O" else T)
    S = Tf @ dec.certificate
    Af = np.asarray(convert(pair.A, COMPLEX) if pair.A.dtype.kind == "O" else pair.A, dtype=complex)
    Bf = np.asarray(convert(pair.B, COMPLEX) if pair.B.dtype.kind == "O" else pair.B, dtype=complex)
    canon = np.asarray(dec.assemble(COMPLEX), dtype=complex)
    m = pair.size // 2
    r = max(
        np.linalg.norm(S.T @ Af @ S - canon) / max(1.0, np.linalg.norm(Af)),
        np.linalg.norm(S.T @ Bf @ S - omega(m, REAL)) / max(1.0, np.linalg.norm(Bf)),
    )
    return Decomposition(dec.summands, dec.kind, dec.form, S, float(r), dec.notes)


def _hyperbolic_flip(s: Summand) -> np.ndarray:
    """``X`` with ``X^{-1} Phi^T X = Phi`` (block reversal, with a sign flip inside realified blocks)."""
    n = s.n
    if not s.realified:
        return np.fliplr(np.eye(n))
    k = n // 2
    return np.kron(np.fliplr(np.eye(k)), np.diag([1.0, -1.0]))


def canonicalize_hamiltonian(H: np.ndarray, kind: str | None = None, tol=None, certificate: bool = True) -> Decomposition:
    """Canonical form of a Hamiltonian ``H`` under symplectic similarity.

    Computed from ``canonicalize(-Omega H)``; each summand is realised as
    ``[[Phi, 0], [0, -Phi^T]]``, ``±Omega P_n`` or ``±Omega Q_n(c)``.
    """
    if not is_hamiltonian(H):
        raise PreconditionError("H is not Hamiltonian")
    kind = kind or _default_kind(H)
    A = form_of_hamiltonian(H)
    dec = canonicalize(A, kind, tol, certificate)
    out = dec.as_hamiltonian()
    if dec.certificate is None:
        return Decomposition(out.summands, kind, "hamiltonian", notes=dec.notes)
    # S^{-1} H S = Omega (S^T A S); turn each [[Phi^T,0],[0,-Phi]] into [[Phi,0],[0,-Phi^T]]
    ys = []
    for s in out.summands:
        if s.kind == "hyperbolic":
            X = _hyperbolic_flip(s)
            ys.append(direct_sum([X, np.linalg.inv(X).T]))
        else:
            ys.append(np.eye(s.size))
    Y = block_direct_sum(ys)
    S = dec.certificate @ Y
    Hf = np.asarray(convert(H, COMPLEX) if H.dtype.kind == "O" else H, dtype=complex)
    canon = np.asarray(out.assemble(COMPLEX), dtype=complex)
    m = H.shape[0] // 2
    Om = omega(m, REAL)
    r = max(
        np.linalg.norm(np.linalg.solve(S, Hf @ S) - canon) / max(1.0, np.linalg.norm(Hf)),
        np.linalg.norm(S.T @ Om @ S - Om),
    )
    return Decomposition(out.summands, kind, "hamiltonian", S, float(r), dec.notes)


# ---------------------------------------------------------------------------
# deciders


def congruent_pairs(P1: MatrixPair, P2: MatrixPair, kind: str | None = None, tol=None) -> bool:
    """Whether two pairs are congruent, by comparing canonical summand multisets."""
    if P1.size != P2.size:
        raise PreconditionError("pairs have different sizes")
    if field_of(P1.A).exact != field_of(P2.A).exact:
        raise PreconditionError("pairs must share a backend")
    kind = kind or ("complex" if P1.field.is_complex or P2.field.is_complex else "real")
    d1 = canonicalize_pair(P1, kind, tol, certificate=False)
    d2 = canonicalize_pair(P2, kind, tol, certificate=False)
    return d1.matches(d2)


def symplectically_similar(H1: np.ndarray, H2: np.ndarray, kind: str | None = None, tol=None) -> bool:
    """Whether ``H2 = S^{-1} H1 S`` for a symplectic ``S``."""
    if H1.shape != H2.shape:
        raise PreconditionError("matrices have different sizes")
    for H in (H1, H2):
        if not is_hamiltonian(H):
            raise PreconditionError("input is not Hamiltonian")
    kind = kind or ("complex" if field_of(H1).is_complex or field_of(H2).is_complex else "real")
    d1 = canonicalize_hamiltonian(H1, kind, tol, certificate=False)
    d2 = canonicalize_hamiltonian(H2, kind, tol, certificate=False)
    return d1.matches(d2)


# ---------------------------------------------------------------------------
# positive definite forms


def is_positive_definite(A: np.ndarray, tol=None) -> bool:
    """Pivoted symmetric elimination; floating pivots must exceed ``eps * trace(A) / n``."""
    if not is_symmetric(A):
        return False
    n = A.shape[0]
    if field_of(A).exact:
        pos, _, _ = inertia(A)
        return pos == n
    M = np.array(A, dtype=float)
    eps = get_tolerance() if tol is None else tol
    thr = eps * max(np.trace(M), 0.0) / max(n, 1)
    if np.trace(M) <= 0:
        return False
    for k in range(n):
        sub = M[k:, k:]
        j = k + int(np.argmax(np.diag(sub)))
        if M[j, j] <= thr:
            return False
        M[[k, j]] = M[[j, k]]
        M[:, [k, j]] = M[:, [j, k]]
        d = M[k, k]
        M[k + 1 :, k + 1 :] -= np.outer(M[k + 1 :, k], M[k, k + 1 :]) / d
    return True


def williamson(A: np.ndarray, tol=None) -> tuple[np.ndarray, np.ndarray]:
    """``(D, S)`` with ``S`` symplectic and ``S^T A S = D ⊕ D``, ``D`` descending."""
    _check_symmetric_even(A)
    Af = np.array(convert(A, REAL) if A.dtype.kind == "O" else A, dtype=float)
    if not is_positive_definite(Af, tol):
        raise PreconditionError("A is not positive definite")
    n = Af.shape[0] // 2
    Om = omega(n, REAL)
    w, V = np.linalg.eigh(Af)
    inv_sqrt = (V / np.sqrt(w)) @ V.T
    K = inv_sqrt @ Om @ inv_sqrt
    K = (K - K.T) / 2
    T, Q = scipy.linalg.schur(K, output="real")
    firsts, seconds, deltas = [], [], []
    j = 0
    while j < 2 * n:
        d = T[j, j + 1]
        if d >= 0:
            firsts.append(Q[:, j])
            seconds.append(Q[:, j + 1])
        else:
            firsts.append(Q[:, j + 1])
            seconds.append(Q[:, j])
        deltas.append(abs(d))
        j += 2
    order = np.argsort(deltas)  # ascending delta = descending alpha
    alphas = np.array([1.0 / deltas[k] for k in order])
    O = np.stack([firsts[k] for k in order] + [seconds[k] for k in order], axis=1)
    root = np.sqrt(np.concatenate([alphas, alphas]))
    S = inv_sqrt @ O * root
    return np.diag(alphas), S


def symplectic_eigenvalues(A: np.ndarray, tol=None) -> list[float]:
    """The ``α_j`` of the Williamson form, descending."""
    D, _ = williamson(A, tol)
    return [float(x) for x in np.diag(D)]


__all__ = [
    "Decomposition",
    "Summand",
    "canonicalize",
    "canonicalize_complex",
    "canonicalize_hamiltonian",
    "canonicalize_pair",
    "canonicalize_real",
    "congruent_pairs",
    "form_of_hamiltonian",
    "hamiltonian_of_form",
    "is_positive_definite",
    "multisets_match",
    "reduce_skew_to_omega",
    "sign_characteristic",
    "symplectic_eigenvalues",
    "symplectically_similar",
    "williamson",
]
