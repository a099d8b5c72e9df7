"""Exact arithmetic in real cyclotomic fields Q(2cos(2*pi/m)).

Only what the root systems of non-crystallographic types and the dihedral
Schur elements need: field operations, a real embedding for sign tests, and
exact conversion back to rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import sympy

__all__ = ["NumberField", "NFElement", "cos_field", "two_cos", "to_rational"]


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _polymul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _polysub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _polydivmod(a, b):
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = _trim(a)
    return _trim(q), a


class NumberField:
    """Q(t) for t a real root of the monic integer polynomial ``minpoly``.

    ``minpoly`` lists coefficients from the constant term upwards.
    """

    def __init__(self, minpoly, approx: float, name: str = "t"):
        minpoly = tuple(int(c) for c in minpoly)
        if minpoly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.minpoly = minpoly
        self.degree = len(minpoly) - 1
        self.approx = float(approx)
        self.name = name
        self._reduce_cache = {}

    def __repr__(self):
        return f"NumberField({self.minpoly}, {self.approx!r}, {self.name!r})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly and \
            abs(self.approx - other.approx) < 1e-9

    def __hash__(self):
        return hash(self.minpoly)

    def __call__(self, value) -> "NFElement":
        if isinstance(value, NFElement):
            if value.field != self:
                raise ValueError("element of a different field")
            return value
        return NFElement(self, (Fraction(value),))

    @property
    def gen(self) -> "NFElement":
        return NFElement(self, (Fraction(0), Fraction(1)))

    def _reduce(self, coeffs):
        coeffs = _trim(coeffs)
        if len(coeffs) <= self.degree:
            return tuple(coeffs)
        _, r = _polydivmod(coeffs, self.minpoly)
        return tuple(r)


class NFElement:
    """Element of a :class:`NumberField`; immutable, hashable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = field._reduce([Fraction(c) for c in coeffs])

    @classmethod
    def _make(cls, field, coeffs):
        """Build from already reduced Fraction coefficients, trimming zeros."""
        obj = object.__new__(cls)
        obj.field = field
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        obj.coeffs = tuple(coeffs)
        return obj

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mixing elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return NFElement._make(self.field, (Fraction(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return NFElement._make(self.field, [x + b[i] if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return NFElement._make(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement._make(self.field, [c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if self.field.degree == 2 and len(a) == 2 and len(b) == 2:
            c0, c1 = self.field.minpoly[0], self.field.minpoly[1]
            top = a[1] * b[1]
            return NFElement._make(self.field, [a[0] * b[0] - c0 * top,
                                                a[0] * b[1] + a[1] * b[0] - c1 * top])
        if len(a) <= 1 or len(b) <= 1:
            if not a or not b:
                return NFElement._make(self.field, ())
            if len(a) == 1:
                return NFElement._make(self.field, [a[0] * y for y in b])
            return NFElement._make(self.field, [x * b[0] for x in a])
        return NFElement(self.field, _polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in a number field")
        # extended Euclid in Q[x] against the minimal polynomial
        r0, r1 = [Fraction(c) for c in self.field.minpoly], list(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _polydivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _polysub(s0, _polymul(q, s1))
        c = r1[0]
        return NFElement(self.field, [x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement._make(self.field, [c / other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = NFElement(self.field, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return self.coeffs == (Fraction(other),)
        if isinstance(other, NFElement):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash(self.coeffs)

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def __float__(self):
        t = self.field.approx
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def sign(self) -> int:
        if not self.coeffs:
            return 0
        if self.is_rational():
            return 1 if self.coeffs[0] > 0 else -1
        # the minimal polynomial makes every nonzero element far from 0 at
        # the sizes used here; refine with sympy if the float is ambiguous
        x = float(self)
        if abs(x) > 1e-9:
            return 1 if x > 0 else -1
        t = sympy.Symbol("t")
        root = sympy.CRootOf(sympy.Poly(list(reversed(self.field.minpoly)), t), 0)
        for r in sympy.Poly(list(reversed(self.field.minpoly)), t).all_roots():
            if abs(float(r) - self.field.approx) < 1e-9:
                root = r
        expr = sum(sympy.Rational(c.numerator, c.denominator) * root ** i
                   for i, c in enumerate(self.coeffs))
        return 1 if sympy.N(expr, 60) > 0 else -1

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        return f"NFElement({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mon = "" if i == 0 else (self.field.name if i == 1 else f"{self.field.name}^{i}")
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return "(" + " + ".join(parts).replace("+ -", "- ") + ")"


def to_rational(x):
    """Return ``x`` as an int or Fraction when it is rational, else raise."""
    if isinstance(x, NFElement):
        if not x.is_rational():
            raise ValueError(f"{x} is irrational")
        x = x.coeffs[0] if x.coeffs else Fraction(0)
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


@lru_cache(maxsize=None)
def cos_field(m: int) -> NumberField | None:
    """The field Q(2cos(2*pi/m)) with that number as generator.

    Returns ``None`` when the field is Q (m in 1, 2, 3, 4, 6).
    """
    if m in (1, 2, 3, 4, 6):
        return None
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.minimal_polynomial(2 * sympy.cos(2 * sympy.pi / m), x), x)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return NumberField(coeffs, 2 * math.cos(2 * math.pi / m), name=f"c{m}")


def two_cos(m: int, j: int, field: NumberField | None = None):
    """Exact value of 2cos(2*pi*j/m), expressed in ``cos_field(m)``.

    Uses the Chebyshev recursion t_j = t_1 t_{j-1} - t_{j-2}.
    """
    if field is None:
        field = cos_field(m)
    j %= m
    if field is None:
        table = {0: 2}
        value = 2 * math.cos(2 * math.pi * j / m)
        return int(round(value)) if abs(value - round(value)) < 1e-9 else Fraction(round(value * 2), 2)
    t0, t1 = field(2), field.gen
    if j == 0:
        return t0
    for _ in range(j - 1):
        t0, t1 = t1, t1 * field.gen - t0
    return t1
