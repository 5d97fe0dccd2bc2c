"""Scalar fields.

Four backends are supported:

``rational``
    exact rationals, stored as :class:`gmpy2.mpq` (always in lowest terms with a
    positive denominator).
``gaussian``
    exact Gaussian rationals ``p + q*i``, stored as :class:`GaussianRational`.
``real`` / ``complex``
    IEEE doubles compared with a relative-plus-absolute tolerance.

Canonical parameters that leave these fields (``sqrt(2)``, ``1 + sqrt(-3)``)
are carried as :class:`QuadraticNumber` values.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .errors import BackendMismatch

DEFAULT_TOL = 1e-9

_tol: contextvars.ContextVar[float] = contextvars.ContextVar("sympcanon_tol", default=DEFAULT_TOL)


def get_tolerance() -> float:
    """Return the comparison tolerance used by the floating backends."""
    return _tol.get()


def set_tolerance(eps: float) -> None:
    if not eps > 0:
        raise ValueError(f"tolerance must be positive, got {eps!r}")
    _tol.set(float(eps))


@contextlib.contextmanager
def tolerance(eps: float):
    """Temporarily change the floating tolerance in the current context."""
    if not eps > 0:
        raise ValueError(f"tolerance must be positive, got {eps!r}")
    token = _tol.set(float(eps))
    try:
        yield eps
    finally:
        _tol.reset(token)


# ---------------------------------------------------------------------------
# rationals


def to_rational(x) -> mpq:
    """Convert ints, fractions, ``"p/q"`` strings and exactly representable floats to mpq."""
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, (int, mpz)):
        return mpq(x)
    if type(x) is type(mpq()):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, numbers.Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        try:
            return mpq(x.strip())
        except ValueError:
            raise ValueError(f"not a rational literal: {x!r}") from None
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"cannot convert {x!r} to a rational")
        return mpq(Fraction(float(x)))
    if isinstance(x, (np.integer,)):
        return mpq(int(x))
    if isinstance(x, QuadraticNumber) and x.coef == 0 and not isinstance(x, GaussianRational):
        return x.re
    if isinstance(x, GaussianRational) and x.imag == 0:
        return x.real
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def is_rational_square(q) -> bool:
    q = to_rational(q)
    if q < 0:
        return False
    return gmpy2.is_square(q.numerator) and gmpy2.is_square(q.denominator)


def rational_sqrt(q) -> mpq:
    """Exact square root of a rational square."""
    q = to_rational(q)
    if not is_rational_square(q):
        raise ValueError(f"{q} is not the square of a rational")
    return mpq(gmpy2.isqrt(q.numerator), gmpy2.isqrt(q.denominator))


def rational_str(q) -> str:
    q = to_rational(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# quadratic irrationals


def _is_exact_rational(x) -> bool:
    return isinstance(x, (int, mpz, Fraction)) or type(x) is type(mpq())


class QuadraticNumber:
    """Exact number ``re + coef*sqrt(radicand)`` with rational parts.

    ``radicand`` is never a rational square.  A negative radicand makes the
    number non-real (``sqrt`` is the principal branch).  Arithmetic between two
    quadratic numbers is defined when their radicands differ by a rational
    square factor.
    """

    __slots__ = ("re", "coef", "radicand")

    def __init__(self, re=0, coef=0, radicand=-1):
        radicand = to_rational(radicand)
        if radicand == 0 or is_rational_square(radicand):
            raise ValueError(f"radicand {radicand} is a rational square")
        self.re = to_rational(re)
        self.coef = to_rational(coef)
        self.radicand = radicand

    def __setattr__(self, name, value):
        if hasattr(self, "radicand"):
            raise AttributeError("QuadraticNumber is immutable")
        object.__setattr__(self, name, value)

    # construction helpers -------------------------------------------------

    def _new(self, re, coef):
        return quadratic(re, coef, self.radicand)

    def _coerce(self, other):
        """Return ``(re, coef)`` of ``other`` expressed over this radicand, or None."""
        if _is_exact_rational(other) or isinstance(other, numbers.Rational):
            return to_rational(other), mpq(0)
        if isinstance(other, QuadraticNumber):
            if other.radicand == self.radicand:
                return other.re, other.coef
            ratio = other.radicand / self.radicand
            if other.coef == 0:
                return other.re, mpq(0)
            if is_rational_square(ratio):
                return other.re, other.coef * rational_sqrt(ratio)
            raise BackendMismatch(
                f"incompatible radicands {self.radicand} and {other.radicand}"
            )
        return None

    # properties -------------------------------------------------------------

    @property
    def is_real(self) -> bool:
        return self.coef == 0 or self.radicand > 0

    def conjugate(self):
        """Complex conjugate (the identity on real numbers)."""
        if self.radicand < 0:
            return self._new(self.re, -self.coef)
        return self

    def norm(self) -> mpq:
        """Field norm ``re**2 - coef**2 * radicand`` (``|z|**2`` when non-real)."""
        return self.re * self.re - self.coef * self.coef * self.radicand

    def sign(self) -> int:
        """Sign of a real quadratic number, decided exactly."""
        if not self.is_real:
            raise ValueError(f"{self} is not real")
        a, b = self.re, self.coef
        if b == 0:
            return int(gmpy2.sign(a))
        if a == 0 or (a > 0) == (b > 0):
            return int(gmpy2.sign(a)) if a != 0 else int(gmpy2.sign(b))
        # opposite signs: whichever of a**2 and b**2*d is larger wins
        if a * a - b * b * self.radicand > 0:
            return int(gmpy2.sign(a))
        return int(gmpy2.sign(b))

    # arithmetic -------------------------------------------------------------

    def __neg__(self):
        return self._new(-self.re, -self.coef)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.re + o[0], self.coef + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.re - o[0], self.coef - o[1])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(o[0] - self.re, o[1] - self.coef)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.re, self.coef
        c, d = o
        return self._new(a * c + b * d * self.radicand, a * d + b * c)

    __rmul__ = __mul__

    def _inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return self._new(self.re / n, -self.coef / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * self._new(*o)._inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(*o) * self._inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self._inverse() ** (-k)
        result = self._new(mpq(1), mpq(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparisons ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) == other
        try:
            o = self._coerce(other)
        except BackendMismatch:
            return False
        if o is None:
            return NotImplemented
        return self.re == o[0] and self.coef == o[1]

    def __hash__(self):
        if self.coef == 0:
            return hash(self.re)
        return hash((self.re, self.coef * self.coef * self.radicand, self.coef > 0))

    def __bool__(self):
        return self.re != 0 or self.coef != 0

    def _cmp(self, other) -> int:
        diff = self - other
        if isinstance(diff, QuadraticNumber):
            return diff.sign()
        return int(gmpy2.sign(diff))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # conversions ------------------------------------------------------------

    def __complex__(self):
        root = complex(0, math.sqrt(-float(self.radicand))) if self.radicand < 0 else math.sqrt(float(self.radicand))
        return complex(float(self.re) + float(self.coef) * root)

    def __float__(self):
        if not self.is_real:
            raise TypeError(f"{self} is not real")
        return complex(self).real

    def __abs__(self):
        if self.is_real:
            return -self if self.sign() < 0 else self
        return math.sqrt(float(self.norm()))

    def __repr__(self):
        return f"QuadraticNumber({self.re}, {self.coef}, {self.radicand})"

    def __str__(self):
        parts = [] if self.re == 0 else [str(self.re)]
        if self.coef != 0:
            term = f"sqrt({self.radicand})"
            if self.coef != 1:
                term = f"{self.coef}*{term}"
            if parts:
                parts.append("-" if self.coef < 0 else "+")
                term = term.lstrip("-") if self.coef < 0 else term
                if self.coef == -1:
                    term = f"sqrt({self.radicand})"
            parts.append(term)
        return "".join(parts) or "0"


class GaussianRational(QuadraticNumber):
    """Exact complex rational ``real + imag*i``.

    Unlike a plain :class:`QuadraticNumber`, a Gaussian rational stays a
    Gaussian rational when its imaginary part vanishes, so that every entry of a
    Gaussian matrix keeps the same type.
    """

    __slots__ = ()

    def __init__(self, real=0, imag=0):
        object.__setattr__(self, "re", to_rational(real))
        object.__setattr__(self, "coef", to_rational(imag))
        object.__setattr__(self, "radicand", mpq(-1))

    def _new(self, re, coef):
        return GaussianRational(re, coef)

    @property
    def real(self) -> mpq:
        return self.re

    @property
    def imag(self) -> mpq:
        return self.coef

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.coef})"

    def __str__(self):
        if self.coef == 0:
            return str(self.re)
        im = "i" if self.coef == 1 else ("-i" if self.coef == -1 else f"{self.coef}i")
        if self.re == 0:
            return im
        return f"{self.re}{'' if im.startswith('-') else '+'}{im}"


def quadratic(re, coef, radicand):
    """Build ``re + coef*sqrt(radicand)``, collapsing to mpq / GaussianRational when possible."""
    re, coef, radicand = to_rational(re), to_rational(coef), to_rational(radicand)
    if coef == 0:
        return re
    if radicand == -1:
        return GaussianRational(re, coef)
    if is_rational_square(radicand):
        return re + coef * rational_sqrt(radicand)
    if radicand < 0 and is_rational_square(-radicand):
        return GaussianRational(re, coef * rational_sqrt(-radicand))
    return QuadraticNumber(re, coef, radicand)


def sqrt_exact(q):
    """Principal square root of a rational, exactly."""
    return quadratic(0, 1, q)


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class Field:
    """A scalar backend."""

    name: str
    exact: bool
    is_complex: bool

    @property
    def dtype(self):
        if self.exact:
            return object
        return complex if self.is_complex else float

    def convert(self, x):
        if self.name == "rational":
            return to_rational(x)
        if self.name == "gaussian":
            return to_gaussian(x)
        if self.name == "real":
            if isinstance(x, QuadraticNumber):
                return float(x)
            if isinstance(x, str):
                return float(to_rational(x))
            if isinstance(x, (complex, np.complexfloating)):
                if x.imag != 0:
                    raise TypeError(f"non-real value {x!r} for the real field")
                return float(x.real)
            return float(x)
        if isinstance(x, (list, tuple)) and len(x) == 2:
            return complex(float(self._part(x[0])), float(self._part(x[1])))
        if isinstance(x, str):
            return complex(float(to_rational(x)))
        return complex(x)

    @staticmethod
    def _part(v):
        return to_rational(v) if isinstance(v, str) else v

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def __str__(self):
        return self.name


RATIONAL = Field("rational", exact=True, is_complex=False)
GAUSSIAN = Field("gaussian", exact=True, is_complex=True)
REAL = Field("real", exact=False, is_complex=False)
COMPLEX = Field("complex", exact=False, is_complex=True)

FIELDS = {f.name: f for f in (RATIONAL, GAUSSIAN, REAL, COMPLEX)}


def get_field(field) -> Field:
    if isinstance(field, Field):
        return field
    try:
        return FIELDS[field]
    except KeyError:
        raise ValueError(f"unknown field {field!r}; expected one of {sorted(FIELDS)}") from None


def to_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, QuadraticNumber):
        if x.radicand < 0 and is_rational_square(-x.radicand):
            return GaussianRational(x.re, x.coef * rational_sqrt(-x.radicand))
        raise TypeError(f"{x} is not a Gaussian rational")
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return GaussianRational(to_rational(x[0]), to_rational(x[1]))
    if isinstance(x, (complex, np.complexfloating)):
        return GaussianRational(to_rational(x.real), to_rational(x.imag))
    return GaussianRational(to_rational(x), 0)


def backend_of(x) -> Field:
    """Classify a scalar.  Exact real quadratic numbers count as rational-backend values."""
    if isinstance(x, GaussianRational):
        return GAUSSIAN
    if isinstance(x, QuadraticNumber):
        return RATIONAL if x.is_real else GAUSSIAN
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if _is_exact_rational(x) or isinstance(x, numbers.Rational):
        return RATIONAL
    if isinstance(x, (float, np.floating)):
        return REAL
    if isinstance(x, (complex, np.complexfloating)):
        return COMPLEX
    raise TypeError(f"not a scalar: {type(x).__name__}")


def scalar_eq(a, b, tol: float | None = None) -> bool:
    """Exact equality on exact backends; relative-plus-absolute tolerance on floats.

    Raises :class:`BackendMismatch` when an exact value is compared with a float.
    """
    fa, fb = backend_of(a), backend_of(b)
    if fa.exact != fb.exact:
        raise BackendMismatch(f"cannot compare {fa} value with {fb} value")
    if fa.exact:
        return a == b
    eps = get_tolerance() if tol is None else tol
    return abs(a - b) <= eps * max(1.0, abs(a), abs(b))


def exact_sign(x) -> int:
    """Sign of an exact real scalar."""
    if isinstance(x, QuadraticNumber):
        return x.sign()
    return int(gmpy2.sign(to_rational(x)))


# ---------------------------------------------------------------------------
# serialization


def scalar_to_json(x):
    """Rationals -> ``"p/q"``, Gaussian -> ``["p/q", "p/q"]``, complex floats -> ``[re, im]``."""
    if isinstance(x, GaussianRational):
        return [rational_str(x.real), rational_str(x.imag)]
    if isinstance(x, QuadraticNumber):
        return {
            "re": rational_str(x.re),
            "coef": rational_str(x.coef),
            "radicand": rational_str(x.radicand),
        }
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (float, np.floating)):
        return float(x)
    return rational_str(x)


def scalar_from_json(v, field=None):
    if isinstance(v, dict):
        return quadratic(v["re"], v["coef"], v["radicand"])
    if field is not None:
        return get_field(field).convert(v)
    if isinstance(v, str):
        return to_rational(v)
    if isinstance(v, list):
        if all(isinstance(p, str) for p in v):
            return to_gaussian(v)
        return complex(v[0], v[1])
    if isinstance(v, int):
        return to_rational(v)
    return float(v)
