"""Elements a + b*sqrt(d) of a real quadratic field Q(sqrt d).

Only boundary rays of 2-dimensional invariant hyperbolic planes need these;
everything else in the package stays over Q.  Mixed arithmetic with ``int``
and ``Fraction`` works in both directions; mixing two different radicands
raises ``ValueError``.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .linalg import to_fraction


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return (k, d) with n = k^2 * d and d square-free (n > 0)."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    k, d = 1, 1
    p = 2
    m = n
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1
    return k, d * m


def sqrt_rational(x) -> "Fraction | QuadraticScalar":
    """Exact square root of a nonnegative rational, as a Fraction when the
    root is rational and as a QuadraticScalar otherwise."""
    x = to_fraction(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    if x == 0:
        return Fraction(0)
    # sqrt(p/q) = sqrt(p q) / q
    n = x.numerator * x.denominator
    k, d = squarefree_decomposition(n)
    coef = Fraction(k, x.denominator)
    if d == 1:
        return coef
    return QuadraticScalar(0, coef, d)


class QuadraticScalar:
    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if d <= 1 or squarefree_decomposition(d)[0] != 1:
            raise ValueError(f"radicand must be a square-free integer > 1, got {d}")
        self.a = to_fraction(a)
        self.b = to_fraction(b)
        self.d = d

    # -- helpers ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadraticScalar):
            if other.d != self.d:
                raise ValueError(f"mixed radicands {self.d} and {other.d}")
            return other.a, other.b
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fraction(other), Fraction(0)
        return None

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadraticScalar":
        return QuadraticScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 against d b^2
        n = a * a - self.d * b * b
        return sa if n > 0 else sb

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * self.d ** 0.5

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticScalar(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticScalar(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticScalar(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return QuadraticScalar(
            self.a * a + self.d * self.b * b, self.a * b + self.b * a, self.d
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        n = a * a - self.d * b * b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        # (x)(a - b sqrt d) / n
        return QuadraticScalar(
            (self.a * a - self.d * self.b * b) / n, (self.b * a - self.a * b) / n, self.d
        )

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticScalar(c[0], c[1], self.d) / self

    # -- comparisons -------------------------------------------------------
    def _cmp(self, other):
        c = self._coerce(other)
        if c is None:
            return None
        return QuadraticScalar(self.a - c[0], self.b - c[1], self.d).sign()

    def __eq__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self.a == c[0] and self.b == c[1]

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadraticScalar({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.d})"

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}


def scalar_to_json(x):
    if isinstance(x, QuadraticScalar):
        return x.to_json()
    return str(x)


def scalar_from_json(x, d: int | None = None):
    if isinstance(x, dict):
        if d is None:
            raise ValueError("quadratic-field coordinate given without a field radicand d")
        q = QuadraticScalar(x["a"], x.get("b", "0"), d)
        return q.a if q.is_rational else q
    return to_fraction(x)


def is_rational_scalar(x) -> bool:
    return not isinstance(x, QuadraticScalar) or x.is_rational
