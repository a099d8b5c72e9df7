"""Exact Laurent polynomials in one variable.

``LaurentPoly`` is the scalar ring Z[v, v^-1] of the Hecke algebra.  ``QView``
is the same data rewritten in q = v^-2, used for punctured-surface
invariants and Schur elements.  Coefficients are Python ints in the common
case; Fractions and number-field elements are accepted so that Schur elements
of dihedral groups can live in the same type.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonpolynomialResult, OddExponent, ValidationError, ZeroPoint
from .numberfield import NFElement

__all__ = [
    "LaurentPoly",
    "QView",
    "RationalFunction",
    "Analysis",
    "analyze",
    "to_q_view",
    "evaluate",
    "parse_poly",
    "v",
    "Q",
]


def _normal(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    if isinstance(c, NFElement) and c.is_rational():
        c = c.coeffs[0] if c.coeffs else 0
        if isinstance(c, Fraction) and c.denominator == 1:
            return int(c.numerator)
    return c


def _is_negative(c) -> bool:
    if isinstance(c, NFElement):
        return c.sign() < 0
    return c < 0


class _Sparse:
    """Shared arithmetic for one-variable sparse Laurent polynomials."""

    __slots__ = ("_c",)
    var = "x"

    def __init__(self, terms=None):
        if terms is None:
            self._c = {}
        elif isinstance(terms, dict):
            self._c = {int(e): _normal(c) for e, c in terms.items() if c != 0}
        elif isinstance(terms, _Sparse):
            self._c = dict(terms._c)
        else:
            self._c = {0: _normal(terms)} if terms != 0 else {}

    @classmethod
    def _raw(cls, d):
        obj = cls.__new__(cls)
        obj._c = d
        return obj

    @classmethod
    def monomial(cls, exp: int, coef=1):
        return cls({exp: coef})

    @classmethod
    def const(cls, c):
        return cls(c)

    # -- accessors -----------------------------------------------------
    def terms(self):
        """(exponent, coefficient) pairs by decreasing exponent."""
        return sorted(self._c.items(), reverse=True)

    def coeff(self, exp: int):
        return self._c.get(exp, 0)

    def __getitem__(self, exp: int):
        return self._c.get(exp, 0)

    @property
    def support(self):
        return sorted(self._c)

    def degree(self):
        return max(self._c) if self._c else None

    def low_degree(self):
        return min(self._c) if self._c else None

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def is_integral(self):
        return all(isinstance(c, int) for c in self._c.values())

    # -- arithmetic ----------------------------------------------------
    def _lift(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, _Sparse):
            raise TypeError(f"cannot mix {type(self).__name__} and {type(other).__name__}")
        if isinstance(other, (int, Fraction, NFElement)):
            return type(self)(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if len(other._c) > len(self._c):
            a, b = other._c, self._c
        else:
            a, b = self._c, other._c
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = _normal(s)
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, NFElement)):
            if other == 0:
                return self._raw({})
            return self._raw({e: _normal(c * other) for e, c in self._c.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if not a or not b:
            return self._raw({})
        if len(b) == 1:
            (f, d), = b.items()
            return self._raw({e + f: _normal(c * d) for e, c in a.items()})
        if len(a) == 1:
            (f, d), = a.items()
            return self._raw({e + f: _normal(d * c) for e, c in b.items()})
        out = {}
        get = out.get
        for e, c in a.items():
            for f, d in b.items():
                k = e + f
                out[k] = get(k, 0) + c * d
        return self._raw({e: _normal(c) for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                (e, c), = self._c.items()
                if c in (1, -1):
                    return self._raw({-e * (-n): c ** (-n)})
            raise ValueError("negative power of a non-monomial; use RationalFunction")
        result = type(self)(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int):
        """Multiply by the monomial var^k."""
        return self._raw({e + k: c for e, c in self._c.items()})

    def bar(self):
        """The involution var -> var^-1."""
        return self._raw({-e: c for e, c in self._c.items()})

    def map_coeffs(self, fn):
        return type(self)({e: fn(c) for e, c in self._c.items()})

    def __eq__(self, other):
        if isinstance(other, type(self)):
            return self._c == other._c
        if isinstance(other, _Sparse):
            return False
        if isinstance(other, (int, Fraction, NFElement)):
            if other == 0:
                return not self._c
            return self._c == {0: _normal(other)}
        return NotImplemented

    def __hash__(self):
        return hash((self.var, frozenset(self._c.items())))

    def evaluate(self, point):
        """Exact value at a nonzero rational point."""
        if point == 0:
            raise ZeroPoint("evaluation point must be nonzero")
        if not isinstance(point, NFElement):
            point = Fraction(point)
        total = 0
        for e, c in self._c.items():
            total += c * point ** e
        return _normal(total) if not isinstance(total, NFElement) else total

    def __call__(self, point):
        return self.evaluate(point)

    def content_sum(self):
        """Sum of coefficients (value at 1)."""
        return _normal(sum(self._c.values()))

    # -- formatting ----------------------------------------------------
    def _coef_text(self, c):
        if isinstance(c, NFElement):
            return str(c)
        if isinstance(c, Fraction):
            return f"({c})"
        return str(c)

    def __str__(self):
        return self.to_text()

    def to_text(self):
        pairs = self.terms()
        if not pairs:
            return "0"
        out = []
        for i, (e, c) in enumerate(pairs):
            neg = not isinstance(c, NFElement) and c < 0
            mag = -c if neg else c
            if e == 0:
                body = self._coef_text(mag)
            else:
                mon = self.var if e == 1 else f"{self.var}^{e}"
                body = mon if mag == 1 else f"{self._coef_text(mag)}*{mon}"
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()!r})"

    def to_json(self):
        return {
            "var": self.var,
            "terms": [{"exp": e, "coef": str(c)} for e, c in self.terms()],
        }

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("var", cls.var) != cls.var:
            raise ValidationError(f"expected variable {cls.var}, got {data.get('var')}")
        terms = {}
        for t in data["terms"]:
            coef = Fraction(t["coef"])
            terms[int(t["exp"])] = terms.get(int(t["exp"]), 0) + coef
        return cls(terms)

    @classmethod
    def parse(cls, text: str):
        return parse_poly(text, cls)


class LaurentPoly(_Sparse):
    """Laurent polynomial in v."""

    __slots__ = ()
    var = "v"

    def to_q_view(self) -> "QView":
        return to_q_view(self)


class QView(_Sparse):
    """Laurent polynomial in q = v^-2."""

    __slots__ = ()
    var = "q"

    def to_v(self) -> LaurentPoly:
        return LaurentPoly._raw({-2 * e: c for e, c in self._c.items()})


def to_q_view(p: LaurentPoly) -> QView:
    """Rewrite an even-supported polynomial in v as a polynomial in q = v^-2."""
    if isinstance(p, QView):
        return p
    odd = [e for e in p._c if e % 2]
    if odd:
        raise OddExponent(f"odd powers of v present: {sorted(odd)}")
    return QView._raw({-e // 2: c for e, c in p._c.items()})


def evaluate(p, point):
    return p.evaluate(point)


v = LaurentPoly.monomial(1)
Q = LaurentPoly({-1: 1, 1: -1})  # v^-1 - v


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([a-z](?:\^\(?(-?\d+)\)?)?)?\s*")


def parse_poly(text: str, cls=None):
    """Parse the canonical text form, e.g. ``"q^3 + 2*q^2 - 18 + q^-1"``.

    The variable decides the returned class unless ``cls`` is given.
    """
    s = text.replace("−", "-").replace("⁻¹", "^-1").strip()
    if s in ("", "0"):
        return (cls or LaurentPoly)()
    names = set(re.findall(r"[a-z]", s))
    if len(names) > 1:
        raise ValidationError(f"more than one variable in {text!r}")
    if cls is None:
        cls = QView if names == {"q"} else LaurentPoly
    terms = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValidationError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        sign, num, mono, exp = m.groups()
        if not sign and not first:
            raise ValidationError(f"missing operator in {text!r}")
        if num is None and mono is None:
            raise ValidationError(f"empty term in {text!r}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        e = 0
        if mono is not None:
            if mono[0] != cls.var:
                raise ValidationError(f"expected variable {cls.var} in {text!r}")
            e = int(exp) if exp is not None else 1
        terms[e] = terms.get(e, 0) + c
        pos = m.end()
        first = False
    return cls(terms)


@dataclass(frozen=True)
class Analysis:
    is_positive: bool
    is_bar_symmetric: bool
    is_log_concave: bool

    def as_dict(self):
        return {
            "positive": self.is_positive,
            "symmetric": self.is_bar_symmetric,
            "log_concave": self.is_log_concave,
        }


def _dense(p: _Sparse):
    if not p._c:
        return []
    lo, hi = p.low_degree(), p.degree()
    return [p._c.get(e, 0) for e in range(lo, hi + 1)]


def analyze(p: _Sparse) -> Analysis:
    """Positivity, palindromic symmetry and log-concavity of the coefficients.

    Symmetry means the coefficient sequence over the contiguous exponent
    range reads the same reversed.  Log-concavity is tested on the same
    range with gaps counting as zero coefficients.
    """
    seq = _dense(p)
    positive = bool(p._c) and not any(_is_negative(c) for c in p._c.values())
    symmetric = seq == seq[::-1]
    # an internal zero breaks log-concavity even where the inequality holds
    concave = all(c != 0 for c in seq)
    for i in range(1, len(seq) - 1):
        if not concave:
            break
        d = seq[i] * seq[i] - seq[i - 1] * seq[i + 1]
        if d != 0 and _is_negative(d):
            concave = False
            break
    return Analysis(positive, symmetric, concave)


# -- rational functions --------------------------------------------------

def _poly_divmod(num: dict, den: dict):
    """Long division of Laurent polynomials as ordinary polynomials.

    Both arguments are exponent dicts with field coefficients.  The quotient
    is returned as a Laurent dict, the remainder as the leftover dict.
    """
    num = dict(num)
    dhi, dlo = max(den), min(den)
    lead = den[dhi]
    quot = {}
    floor = min(num) - dlo if num else 0
    while num:
        nhi = max(num)
        if nhi - dhi < floor:
            break
        k = nhi - dhi
        c = num[nhi] / lead if not isinstance(num[nhi], int) or not isinstance(lead, int) \
            else Fraction(num[nhi], lead)
        quot[k] = c
        for e, d in den.items():
            s = num.get(e + k, 0) - c * d
            if s == 0:
                num.pop(e + k, None)
            else:
                num[e + k] = s
    return quot, num


class RationalFunction:
    """Quotient of two Laurent polynomials; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, _Sparse):
            num = LaurentPoly(num)
        if den is None:
            den = type(num)(1)
        elif not isinstance(den, _Sparse):
            den = type(num)(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (_Sparse, int, Fraction, NFElement)):
            return RationalFunction(other if isinstance(other, _Sparse) else type(self.num)(other))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.den == self.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return RationalFunction(self.num ** n, self.den ** n)
        return RationalFunction(self.den ** (-n), self.num ** (-n))

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is unhashable")

    def is_zero(self):
        return self.num.is_zero()

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroPoint("denominator vanishes at the evaluation point")
        return _normal(Fraction(self.num.evaluate(point)) / Fraction(d)) \
            if not isinstance(d, NFElement) else self.num.evaluate(point) / d

    def to_laurent(self):
        """Return the quotient as a Laurent polynomial, or raise if it is not one."""
        if self.num.is_zero():
            return type(self.num)()
        quot, rem = _poly_divmod(self.num._c, self.den._c)
        if rem:
            raise NonpolynomialResult(f"({self.num}) / ({self.den}) is not a Laurent polynomial")
        return type(self.num)(quot)

    def is_laurent(self):
        try:
            self.to_laurent()
        except NonpolynomialResult:
            return False
        return True

    def __repr__(self):
        return f"RationalFunction(({self.num}) / ({self.den}))"
