"""Univariate polynomials over the scalar backends.

Coefficients are stored in ascending order.  The zero polynomial has an
empty coefficient tuple and degree ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import sympy

from .errors import PreconditionError
from .matrices import add, field_of, identity, is_square, mul, scale, zeros
from .scalars import GAUSSIAN, GaussianRational, QuadraticNumber, backend_of, to_rational


def _is_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple = ()

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # construction -------------------------------------------------------

    @classmethod
    def from_ints(cls, coeffs) -> "Polynomial":
        return cls(tuple(to_rational(c) for c in coeffs))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls.from_ints([0, 1])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        one = cls.from_ints([1])
        return reduce(lambda p, r: p * cls((-r, 1)), roots, one)

    # basic properties ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "Polynomial":
        lead = self.leading
        return Polynomial(tuple(c / lead for c in self.coeffs))

    # arithmetic ---------------------------------------------------------

    def _lift(self, other) -> "Polynomial":
        return other if isinstance(other, Polynomial) else Polynomial((other,))

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self[k] + other[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial((self.leading ** 0 if self.coeffs else 1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dlead = other.leading
        dn = other.degree
        quot = [0] * max(0, len(rem) - dn)
        for k in range(len(rem) - dn - 1, -1, -1):
            q = rem[k + dn] / dlead
            quot[k] = q
            if q != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - q * b
        return Polynomial(tuple(quot)), Polynomial(tuple(rem[:dn]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def reflect(self) -> "Polynomial":
        """``p(-x)``."""
        return Polynomial(tuple(-c if k % 2 else c for k, c in enumerate(self.coeffs)))

    def evaluate_matrix(self, M: np.ndarray) -> np.ndarray:
        """``p(M)`` by Horner's rule."""
        if not is_square(M):
            raise PreconditionError("polynomial of a non-square matrix")
        field = field_of(M)
        n = M.shape[0]
        acc = zeros(n, n, field)
        eye = identity(n, field)
        for c in reversed(self.coeffs):
            acc = add(mul(acc, M), scale(eye, c))
        return acc

    # printing ------------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            cs = str(c)
            if mono and c == 1:
                cs = ""
            elif mono and c == -1:
                cs = "-"
            elif mono and isinstance(c, QuadraticNumber):
                cs = f"({cs})"
            terms.append(f"{cs}{mono}" if mono else cs)
        return " + ".join(terms).replace("+ -", "- ")


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd over an exact field."""
    while q:
        p, q = q, p % q
    return p.monic() if p else p


def poly_is_even(p: Polynomial) -> bool:
    """True iff every odd-degree coefficient vanishes, i.e. ``p`` is a polynomial in ``x^2``."""
    return all(c == 0 for c in p.coeffs[1::2])


# ---------------------------------------------------------------------------
# characteristic polynomial


def char_poly(M: np.ndarray) -> Polynomial:
    """``det(xI - M)``.

    Exact backends reduce to Hessenberg form by similarity and expand the
    determinant with the standard three-term recurrence.  Floating backends
    take the coefficients from the eigenvalues.
    """
    if not is_square(M):
        raise PreconditionError(f"characteristic polynomial of a non-square {M.shape} matrix")
    field = field_of(M)
    n = M.shape[0]
    if not field.exact:
        return Polynomial(tuple(np.poly(M)[::-1])) if n else Polynomial((1.0,))
    one = field.one
    h = [[field.convert(x) for x in r] for r in M.tolist()]
    _hessenberg(h)
    polys = [Polynomial((one,))]
    for m in range(1, n + 1):
        pm = Polynomial((-h[m - 1][m - 1], one)) * polys[m - 1]
        t = one
        for i in range(m - 1, 0, -1):
            t = t * h[i][i - 1]
            if t == 0:
                break
            c = h[i - 1][m - 1] * t
            if c != 0:
                pm = pm - polys[i - 1] * c
        polys.append(pm)
    return polys[n]


def _hessenberg(h: list[list]) -> None:
    n = len(h)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            h[piv], h[m] = h[m], h[piv]
            for r in h:
                r[piv], r[m] = r[m], r[piv]
        t = h[m][m - 1]
        for i in range(m + 1, n):
            u = h[i][m - 1] / t
            if u == 0:
                continue
            ri, rm = h[i], h[m]
            for j in range(n):
                ri[j] = ri[j] - u * rm[j]
            for r in h:
                r[m] = r[m] + u * r[i]


# ---------------------------------------------------------------------------
# exact factorization (delegated to sympy)

_X = sympy.Symbol("x")


def _to_sympy(c):
    if isinstance(c, GaussianRational):
        return _to_sympy(c.real) + sympy.I * _to_sympy(c.imag)
    q = to_rational(c)
    return sympy.Rational(int(q.numerator), int(q.denominator))


def _from_sympy(c, gaussian: bool):
    re, im = sympy.re(c), sympy.im(c)
    re_q = to_rational(f"{sympy.Rational(re).p}/{sympy.Rational(re).q}")
    if gaussian:
        im_q = to_rational(f"{sympy.Rational(im).p}/{sympy.Rational(im).q}")
        return GaussianRational(re_q, im_q)
    return re_q


def factor_exact(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Monic irreducible factors with multiplicities over Q or Q(i).

    The domain follows the coefficients: any Gaussian coefficient selects Q(i).
    """
    if p.degree < 1:
        return []
    gaussian = any(backend_of(c) == GAUSSIAN for c in p.coeffs)
    domain = sympy.QQ_I if gaussian else sympy.QQ
    expr = sum(_to_sympy(c) * _X**k for k, c in enumerate(p.coeffs))
    _, factors = sympy.Poly(expr, _X, domain=domain).factor_list()
    out = []
    for f, mult in factors:
        cs = [_from_sympy(c, gaussian) for c in reversed(f.all_coeffs())]
        out.append((Polynomial(tuple(cs)).monic(), int(mult)))
    out.sort(key=lambda fm: (fm[0].degree, str(fm[0])))
    return out


def is_irreducible(p: Polynomial) -> bool:
    f = factor_exact(p)
    return len(f) == 1 and f[0][1] == 1


__all__ = [
    "Polynomial",
    "char_poly",
    "factor_exact",
    "gcd",
    "is_irreducible",
    "poly_is_even",
]
