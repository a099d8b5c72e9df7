"""Small exact linear algebra over Laurent polynomials and over flint mpolys.

Matrices are lists of rows.  Entries are ``LaurentPoly`` objects whose
coefficients live in a field (Fraction or number-field elements), so exact
division is available and fraction-free elimination stays polynomial.
"""

from __future__ import annotations

import math
from fractions import Fraction

import flint

from .errors import VerificationFailed
from .laurent import LaurentPoly, _poly_divmod
from .numberfield import NFElement

__all__ = [
    "exact_div",
    "scale_rows_polynomial",
    "bareiss_det",
    "kernel_vector",
    "pivot_rows",
    "mpoly_bareiss_det",
]


def exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """a / b, which must be a Laurent polynomial."""
    if a.is_zero():
        return LaurentPoly()
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    quot, rem = _poly_divmod(a._c, b._c)
    if rem:
        raise VerificationFailed(f"inexact division ({a}) / ({b})")
    return LaurentPoly(quot)


def scale_rows_polynomial(rows):
    """Multiply each row by a power of v so that all entries are polynomials."""
    out = []
    for row in rows:
        lows = [p.low_degree() for p in row if p]
        k = -min(lows) if lows else 0
        out.append([p.shift(k) for p in row])
    return out


def bareiss_det(rows) -> LaurentPoly:
    """Determinant by fraction-free elimination with exact division."""
    n = len(rows)
    if n == 0:
        return LaurentPoly(1)
    a = [list(r) for r in rows]
    sign = 1
    prev = LaurentPoly(1)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly()
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = pk * a[i][j] - aik * a[k][j]
                a[i][j] = exact_div(num, prev) if num else num
            a[i][k] = LaurentPoly()
        prev = pk
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def _eval_matrix(rows, point):
    return [[_field(p.evaluate(point)) if p else Fraction(0) for p in row] for row in rows]


def _field(x):
    return Fraction(x) if isinstance(x, int) else x


def _rank_rows(vals):
    """Indices of a maximal independent set of rows of a numeric matrix."""
    chosen = []
    basis = []  # reduced rows with pivot column
    for idx, row in enumerate(vals):
        r = list(row)
        for piv, brow in basis:
            if r[piv]:
                f = r[piv] / brow[piv]
                r = [x - f * y for x, y in zip(r, brow)]
        piv = next((j for j, x in enumerate(r) if x), None)
        if piv is not None:
            basis.append((piv, r))
            chosen.append(idx)
    return chosen


def pivot_rows(rows, points=(Fraction(3), Fraction(5, 7), Fraction(-11, 4))):
    """Row indices giving a maximal-rank subset, found at a rational specialization."""
    best = []
    for pt in points:
        got = _rank_rows(_eval_matrix(rows, pt))
        if len(got) > len(best):
            best = got
    return best


def kernel_vector(rows):
    """A nonzero vector y with A y = 0 for an n x n matrix A of corank one.

    The components are the signed maximal minors of n-1 independent rows.
    All of them come out of one fraction-free elimination over Z[v, t, w]:
    appending the row (1, w, ..., w^(n-1)) makes the determinant the
    generating polynomial of the minors.  Common factors are removed.
    """
    n = len(rows[0])
    rows = scale_rows_polynomial(rows)
    chosen = pivot_rows(rows)
    if len(chosen) != n - 1:
        raise VerificationFailed(f"expected corank one, found rank {len(chosen)} of {n}")
    fld = _coefficient_field(rows)
    mat = [_row_to_mpoly(rows[i]) for i in chosen]
    mat.append([_VTW.from_dict({(0, 0, j): 1}) for j in range(n)])
    det = mpoly_bareiss_det(mat)
    comps = {j: {} for j in range(n)}
    for (e, i, j), c in det.terms():
        comps[j][(e, i, 0)] = int(c)
    polys = [_VTW.from_dict(comps[j]) for j in range(n)]
    g = None
    for p in polys:
        if not p.is_zero():
            g = p if g is None else g.gcd(p)
    if g is None:
        raise VerificationFailed("kernel vector vanished")
    return [_mpoly_to_laurent(p / g, fld) if not p.is_zero() else LaurentPoly() for p in polys]


_VTW = flint.fmpz_mpoly_ctx.get(("v", "t", "w"), "lex")


def _coefficient_field(rows):
    for row in rows:
        for p in row:
            for _, c in p.terms():
                if isinstance(c, NFElement):
                    return c.field
    return None


def _coef_parts(c):
    if isinstance(c, NFElement):
        return list(enumerate(c.coeffs))
    return [(0, Fraction(c))]


def _row_to_mpoly(row):
    """Entries of a polynomial row over Z[v, t], cleared of denominators."""
    den = 1
    for p in row:
        for _, c in p.terms():
            for _, part in _coef_parts(c):
                den = math.lcm(den, part.denominator)
    out = []
    for p in row:
        d = {}
        for e, c in p.terms():
            for i, part in _coef_parts(c):
                if part:
                    d[(e, i)] = int(part * den)
        out.append(_VTW.from_dict({(e, i, 0): c for (e, i), c in d.items()}))
    return out


def _mpoly_to_laurent(f, fld) -> LaurentPoly:
    by_exp = {}
    for (e, i, _), c in f.terms():
        by_exp.setdefault(e, {})[i] = int(c)
    out = {}
    for e, parts in by_exp.items():
        if fld is None:
            out[e] = parts.get(0, 0)
        else:
            top = max(parts)
            out[e] = NFElement(fld, [parts.get(i, 0) for i in range(top + 1)])
    return LaurentPoly(out)


def mpoly_bareiss_det(rows):
    """Determinant of a square matrix of flint mpolys (exact division)."""
    n = len(rows)
    a = [list(r) for r in rows]
    ctx = a[0][0].context()
    one = ctx.from_dict({(0,) * ctx.nvars(): 1})
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ctx.from_dict({})
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (pk * a[i][j] - aik * a[k][j]) / prev
        prev = pk
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]
