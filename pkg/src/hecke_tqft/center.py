"""Center of the Hecke algebra: central elements Z_lambda and Schur elements.

Two independent sources of Schur elements:

* closed forms (hook-length products for types A, B, D and the dihedral
  formulas for I2(m)), returned in the q-view;
* a generic splitting of the center, which also yields the central
  elements Z_lambda and hence the characters chi(h) = tr(Z_lambda h).

The generic path works over Q(v) or, when characters are irrational, over
K(v) for a real quadratic field K.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import flint

from .coxeter import CoxeterSystem, CoxeterType, build, parse_type
from .errors import UnsupportedType, VerificationFailed
from .hecke import HeckeAlgebra, HeckeElement, algebra
from .laurent import LaurentPoly, QView, analyze, _poly_divmod, to_q_view
from .linalg import exact_div, kernel_vector, mpoly_bareiss_det, pivot_rows, scale_rows_polynomial
from .numberfield import NFElement, NumberField, cos_field, two_cos

__all__ = [
    "IrreducibleLabel",
    "CentralDecomposition",
    "partitions",
    "conjugate",
    "hook_lengths",
    "syt_count",
    "quantum_int",
    "closed_form_table",
    "schur_closed_form",
    "dims",
    "central_decomposition",
    "character",
    "schur_multiset_duality_check",
    "schur_analyzers",
    "character_field",
]


# -- partitions ------------------------------------------------------------

def partitions(n: int, largest: int | None = None):
    """Partitions of n as weakly decreasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def conjugate(lam) -> tuple:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > j) for j in range(lam[0]))


def _boxes(lam):
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            yield i, j


def generalized_hook(lam, mu, i, j) -> int:
    """lambda_i - i + mu'_j - j + 1."""
    mup = conjugate(mu)
    li = lam[i - 1] if i <= len(lam) else 0
    mj = mup[j - 1] if j <= len(mup) else 0
    return li - i + mj - j + 1


def hook_lengths(lam):
    return [generalized_hook(lam, lam, i, j) for i, j in _boxes(lam)]


def syt_count(lam) -> int:
    """Number of standard Young tableaux (hook length formula)."""
    n = sum(lam)
    return math.factorial(n) // math.prod(hook_lengths(lam)) if n else 1


def n_statistic(lam) -> int:
    """n(lambda) = sum (i - 1) lambda_i."""
    return sum(i * part for i, part in enumerate(lam))


def quantum_int(n: int) -> QView:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    return QView({e: 1 for e in range(n)})


def _q_plus_one(e: int) -> QView:
    return QView({e: 1}) + 1


def _union(lam, mu):
    return tuple(sorted(lam + mu, reverse=True))


def _fmt_partition(lam) -> str:
    return "(" + ",".join(map(str, lam)) + ")"


# -- labels ----------------------------------------------------------------

@dataclass(frozen=True)
class IrreducibleLabel:
    """Label of an irreducible representation with its dimension."""

    name: str
    dim: int
    key: tuple = ()

    def __str__(self):
        return self.name


def _schur_A(lam) -> QView:
    p = QView(1)
    for h in hook_lengths(lam):
        p = p * quantum_int(h)
    return p.shift(-n_statistic(lam))


def _schur_B(lam, mu) -> QView:
    p = QView(1)
    for i, j in _boxes(lam):
        p = p * quantum_int(generalized_hook(lam, lam, i, j)) * _q_plus_one(generalized_hook(lam, mu, i, j) + 1)
    for i, j in _boxes(mu):
        p = p * quantum_int(generalized_hook(mu, mu, i, j)) * _q_plus_one(generalized_hook(mu, lam, i, j) - 1)
    return p.shift(-n_statistic(_union(lam, mu)))


def _schur_D(lam, mu) -> QView:
    p = QView(1)
    for i, j in _boxes(lam):
        p = p * quantum_int(generalized_hook(lam, lam, i, j)) * _q_plus_one(generalized_hook(lam, mu, i, j))
    for i, j in _boxes(mu):
        p = p * quantum_int(generalized_hook(mu, mu, i, j)) * _q_plus_one(generalized_hook(mu, lam, i, j))
    p = p.shift(-n_statistic(_union(lam, mu)))
    if lam == mu:
        return p
    return p * Fraction(1, 2)


def _dihedral_rows(m: int):
    fld = cos_field(m)
    rows = []
    top = QView({e: (1 if e in (0, m) else 2) for e in range(m + 1)})
    rows.append((IrreducibleLabel("triv", 1, ("triv",)), top))
    rows.append((IrreducibleLabel("sign", 1, ("sign",)), top.bar()))
    if m % 2 == 0:
        eps = QView({1: 1, 0: 2, -1: 1}) * Fraction(m, 2)
        rows.append((IrreducibleLabel("eps1", 1, ("eps1",)), eps))
        rows.append((IrreducibleLabel("eps2", 1, ("eps2",)), eps))
    for j in range(1, (m - 1) // 2 + 1):
        theta = two_cos(m, j, fld)
        factor = Fraction(m) / (2 - theta) if not isinstance(theta, NFElement) else (2 - theta).inverse() * m
        s = QView({1: 1, 0: -theta, -1: 1}) * factor
        rows.append((IrreducibleLabel(f"rho{j}", 2, ("rho", j)), s))
    return rows


@lru_cache(maxsize=None)
def _closed_rows(ct: CoxeterType):
    f, n = ct.family, ct.rank
    rows = []
    if f == "A":
        for lam in partitions(n + 1):
            rows.append((IrreducibleLabel(_fmt_partition(lam), syt_count(lam), ("A", lam)), _schur_A(lam)))
    elif f == "B":
        for k in range(n, -1, -1):
            for lam in partitions(k):
                for mu in partitions(n - k):
                    d = math.comb(n, k) * syt_count(lam) * syt_count(mu)
                    name = f"({_fmt_partition(lam)},{_fmt_partition(mu)})"
                    rows.append((IrreducibleLabel(name, d, ("B", lam, mu)), _schur_B(lam, mu)))
    elif f == "D":
        seen = set()
        for k in range(n, -1, -1):
            for lam in partitions(k):
                for mu in partitions(n - k):
                    pair = tuple(sorted((lam, mu), reverse=True))
                    if pair in seen:
                        continue
                    seen.add(pair)
                    lam1, mu1 = pair
                    d = math.comb(n, k) * syt_count(lam) * syt_count(mu)
                    name = f"({_fmt_partition(lam1)},{_fmt_partition(mu1)})"
                    s = _schur_D(lam1, mu1)
                    if lam1 == mu1:
                        for tag in ("+", "-"):
                            rows.append((IrreducibleLabel(name + tag, d // 2, ("D", lam1, mu1, tag)), s))
                    else:
                        rows.append((IrreducibleLabel(name, d, ("D", lam1, mu1)), s))
    elif f == "I":
        rows = _dihedral_rows(ct.m)
    else:
        raise UnsupportedType(f"no closed-form Schur elements for type {ct}")
    return tuple(rows)


def closed_form_table(type_symbol):
    """[(label, schur element as QView)] from the closed formulas."""
    return list(_closed_rows(parse_type(type_symbol)))


def schur_closed_form(type_symbol, label) -> QView:
    for lab, s in closed_form_table(type_symbol):
        if lab == label or lab.name == str(label) or lab.key == label:
            return s
    raise UnsupportedType(f"unknown label {label!r} for type {type_symbol}")


def dims(type_symbol, label=None):
    """Dimension of one irreducible, or the list of all dimensions."""
    table = closed_form_table(type_symbol)
    if label is None:
        return [lab.dim for lab, _ in table]
    for lab, _ in table:
        if lab == label or lab.name == str(label) or lab.key == label:
            return lab.dim
    raise UnsupportedType(f"unknown label {label!r} for type {type_symbol}")


def character_field(ct: CoxeterType) -> NumberField | None:
    """Field generated by the character values, with a generator compatible
    with the closed dihedral formulas."""
    if ct.family == "I":
        return cos_field(ct.m)
    if ct.family == "H":
        return cos_field(5)
    return None


# -- central decomposition ---------------------------------------------------

@dataclass
class CentralDecomposition:
    """Z_lambda (standard coordinates), Schur elements (q-view) and dimensions."""

    system: CoxeterSystem
    labels: list
    Z: list
    schur: list
    dims: list
    field: NumberField | None = None
    method: str = "generic"
    verified: bool = False

    @property
    def algebra(self) -> HeckeAlgebra:
        return algebra(self.system)

    def __len__(self):
        return len(self.labels)

    def index(self, label) -> int:
        for i, lab in enumerate(self.labels):
            if lab == label or lab.name == str(label) or lab.key == label:
                return i
        if isinstance(label, int):
            return label
        raise KeyError(label)

    def schur_v(self, i) -> LaurentPoly:
        return self.schur[i].to_v()

    def character(self, label, h: HeckeElement) -> LaurentPoly:
        """chi_lambda(h) = tr(Z_lambda h)."""
        i = self.index(label)
        return self.algebra.trace_pair(self.Z[i], h.to_standard())

    def central_character(self, label, z: HeckeElement):
        """Scalar by which a central element acts, as chi(z) / dim."""
        return self.character(label, z) * Fraction(1, self.dims[self.index(label)])

    def verify(self, products: bool = True) -> "CentralDecomposition":
        """Symbolic post-checks; raise VerificationFailed on the first failure."""
        alg = self.algebra
        n = len(self.labels)
        if n != self.system.conjugacy_class_count():
            raise VerificationFailed("number of labels differs from the number of classes")
        if sum(d * d for d in self.dims) != self.system.order:
            raise VerificationFailed("sum of squared dimensions differs from |W|")
        for i in range(n):
            if alg.trace(self.Z[i]) != self.dims[i]:
                raise VerificationFailed(f"tr Z differs from dim for {self.labels[i]}")
            if not alg.is_central(self.Z[i]):
                raise VerificationFailed(f"Z for {self.labels[i]} is not central")
        svs = [self.schur_v(i) for i in range(n)]
        # sum Z / s = 1, cleared of denominators
        total = alg.zero()
        prod_all = LaurentPoly(1)
        for s in svs:
            prod_all = prod_all * s
        for i in range(n):
            others = LaurentPoly(1)
            for j in range(n):
                if j != i:
                    others = others * svs[j]
            total = total + self.Z[i].scale(others)
        if total != alg.scalar(prod_all):
            raise VerificationFailed("sum of Z / s is not the identity")
        if products:
            for i in range(n):
                for j in range(i, n):
                    p = alg.multiply(self.Z[i], self.Z[j])
                    want = self.Z[i].scale(svs[i]) if i == j else alg.zero()
                    if p != want:
                        raise VerificationFailed(
                            f"Z products fail for {self.labels[i]}, {self.labels[j]}")
        self.verified = True
        return self

    def duality_check(self) -> bool:
        return schur_multiset_duality_check(self)

    def analyzers(self):
        return schur_analyzers(self)


def schur_multiset_duality_check(decomp) -> bool:
    """True iff the multiset {s(q^-1)} equals {s(q)}."""
    schur = decomp.schur if isinstance(decomp, CentralDecomposition) else [s for _, s in decomp]
    a = sorted(map(_key, schur))
    b = sorted(_key(s.bar()) for s in schur)
    return a == b


def _key(p):
    return tuple((e, str(c)) for e, c in p.terms())


def schur_analyzers(decomp):
    """[(label, dim, s, Analysis)] for a decomposition or a closed-form table."""
    if isinstance(decomp, CentralDecomposition):
        rows = zip(decomp.labels, decomp.schur)
    else:
        rows = decomp
    return [(lab, lab.dim, s, analyze(s)) for lab, s in rows]


def character(decomp: CentralDecomposition, label, h: HeckeElement) -> LaurentPoly:
    return decomp.character(label, h)


_DECOMP_CACHE: dict = {}


def central_decomposition(system, seed: int = 20240601, retries: int = 6,
                          products: bool = True) -> CentralDecomposition:
    """Split the center generically and verify all defining identities.

    Labels are matched to the closed-form labels when a closed form exists.
    """
    if not isinstance(system, CoxeterSystem):
        system = build(system)
    key = (id(system), products)
    hit = _DECOMP_CACHE.get(key)
    if hit is not None and hit.system is system:
        return hit
    decomp = _generic(system, seed, retries)
    decomp.verify(products=products)
    _DECOMP_CACHE[key] = decomp
    return decomp


def _generic(system: CoxeterSystem, seed: int, retries: int) -> CentralDecomposition:
    alg = algebra(system)
    order = system.order
    reps = [cls[0] for cls in system.conjugacy_classes]
    r = len(reps)
    zs = [alg.conj_average(alg.h(w)) for w in reps]
    coord_rows = [[z.coords.get(u, LaurentPoly()) for z in zs] for u in range(order)]
    pivots = pivot_rows(coord_rows)
    if len(pivots) != r:
        raise VerificationFailed("class sums of minimal-length representatives are dependent")
    fld = character_field(system.type)
    rng = random.Random(seed)
    inv = system.inv
    for _attempt in range(retries):
        weights = [rng.randint(-4, 4) or 1 for _ in range(r)]
        zc = alg.zero()
        for a, z in zip(weights, zs):
            zc = zc + z.scale(a)
        # Y[p][D] = coefficient of h_p in zc * z_D = tr(h_{p^-1} zc z_D)
        Bm, Ym = [], []
        for p in pivots:
            left = alg.multiply(alg.h(inv[p]), zc)
            Bm.append([z.coords.get(p, LaurentPoly()) for z in zs])
            Ym.append([alg.trace_pair(left, z) for z in zs])
        eig = _eigenvalues(Bm, Ym, fld)
        if eig is None:
            continue
        labels, Zs, schurs, dimlist = [], [], [], []
        for x0 in eig:
            A = [[Ym[i][j] - x0 * Bm[i][j] for j in range(r)] for i in range(r)]
            y = kernel_vector(A)
            E = alg.zero()
            for coef, z in zip(y, zs):
                if coef:
                    E = E + z.scale(coef)
            Ee = E.coords.get(0, LaurentPoly())
            trEE = alg.trace_pair(E, E)
            # u = s / dim = tr(E^2) / tr(E)^2; its value at v = 1 is |W| / dim^2
            u1 = _rational(_value_at_one(trEE, Ee * Ee))
            d2 = Fraction(order) / u1 if u1 is not None else None
            if d2 is None or d2.denominator != 1 or math.isqrt(int(d2)) ** 2 != d2:
                raise VerificationFailed(f"non-square dimension estimate {d2}")
            d = math.isqrt(int(d2))
            s_v = exact_div(trEE * d, Ee * Ee)
            Z = HeckeElement._raw(system, {w: exact_div(c * d, Ee) for w, c in E.coords.items()})
            Zs.append(Z)
            schurs.append(to_q_view(s_v))
            dimlist.append(d)
        labels = _assign_labels(system.type, dimlist, schurs)
        order_idx = sorted(range(r), key=lambda i: _label_sort_key(system.type, labels[i], i))
        return CentralDecomposition(
            system=system,
            labels=[labels[i] for i in order_idx],
            Z=[Zs[i] for i in order_idx],
            schur=[schurs[i] for i in order_idx],
            dims=[dimlist[i] for i in order_idx],
            field=fld,
        )
    raise VerificationFailed("eigenvalue collision persisted after all retries")


def _label_sort_key(ct, label, i):
    try:
        names = [lab.name for lab, _ in closed_form_table(ct)]
        return (names.index(label.name), i)
    except (UnsupportedType, ValueError):
        return (len(label.name), label.name, i)


def _assign_labels(ct, dimlist, schurs):
    """Match generic results to closed-form labels through (dim, Schur element)."""
    try:
        table = closed_form_table(ct)
    except UnsupportedType:
        table = None
    if table is not None and len(table) == len(dimlist):
        free = list(table)
        out = []
        for d, s in zip(dimlist, schurs):
            for k, (lab, cs) in enumerate(free):
                if lab.dim == d and cs == s:
                    out.append(lab)
                    free.pop(k)
                    break
            else:
                raise VerificationFailed(f"generic Schur element {s} (dim {d}) has no closed-form match")
        return out
    names = []
    count = {}
    for d, s in zip(dimlist, schurs):
        count[d] = count.get(d, 0) + 1
        names.append(IrreducibleLabel(f"phi{d}.{count[d]}", d, ("generic", d, count[d])))
    return names


def _rational(x):
    if isinstance(x, NFElement):
        return Fraction(x.coeffs[0]) if x.is_rational() and x.coeffs else (Fraction(0) if x.is_rational() else None)
    return Fraction(x)


def _value_at_one(num: LaurentPoly, den: LaurentPoly):
    """Value of num/den at v = 1, cancelling common factors (v - 1)."""
    one_minus = LaurentPoly({1: 1, 0: -1})
    for _ in range(200):
        a, b = num.evaluate(1), den.evaluate(1)
        if b != 0:
            if isinstance(a, NFElement) or isinstance(b, NFElement):
                return a / b
            return Fraction(a) / Fraction(b)
        if a != 0:
            raise VerificationFailed("pole at v = 1")
        num, den = exact_div(num, one_minus), exact_div(den, one_minus)
    raise VerificationFailed("could not evaluate at v = 1")


# -- eigenvalues via det(x B - Y) -------------------------------------------

_CTX = flint.fmpz_mpoly_ctx.get(("v", "x"), "lex")


def _to_mpoly(p: LaurentPoly, xdeg: int = 0):
    if not p:
        return _CTX.from_dict({})
    return _CTX.from_dict({(e, xdeg): int(c) for e, c in p.terms()})


def _x_coeffs(f) -> dict:
    """{x-degree: LaurentPoly in v} for a flint polynomial in (v, x)."""
    out = {}
    for (ev, ex), c in f.terms():
        out.setdefault(ex, {})[ev] = int(c)
    return {k: LaurentPoly(d) for k, d in out.items()}


def _eigenvalues(Bm, Ym, fld):
    """Roots of det(x B - Y) as Laurent polynomials, or None on a collision."""
    r = len(Bm)
    rows = scale_rows_polynomial([Bm[i] + Ym[i] for i in range(r)])
    Bs = [row[:r] for row in rows]
    Ys = [row[r:] for row in rows]
    mat = [[_to_mpoly(Bs[i][j], 1) - _to_mpoly(Ys[i][j]) for j in range(r)] for i in range(r)]
    F = mpoly_bareiss_det(mat)
    _, factors = F.factor()
    roots = []
    for f, mult in factors:
        deg = f.degrees()[1]
        if deg == 0:
            continue
        if mult > 1:
            return None
        cx = _x_coeffs(f)
        if deg == 1:
            roots.append(exact_div(-cx.get(0, LaurentPoly()), cx[1]))
        elif deg == 2:
            roots.extend(_quadratic_roots(f, cx, fld))
        else:
            raise UnsupportedType("character field of degree > 2 is not supported by the generic splitting")
    if len(roots) != r:
        raise VerificationFailed(f"found {len(roots)} eigenvalues, expected {r}")
    return roots


def _quadratic_roots(f, cx, fld):
    if fld is None or fld.degree != 2:
        raise UnsupportedType("irrational eigenvalues need a quadratic character field")
    a, b, c = cx.get(2, LaurentPoly()), cx.get(1, LaurentPoly()), cx.get(0, LaurentPoly())
    disc = b * b - a * c * 4
    const, facs = _to_mpoly(disc).factor()
    root = LaurentPoly(1)
    for g, e in facs:
        if e % 2:
            raise VerificationFailed("discriminant is not a square times a constant")
        root = root * _x_coeffs(g)[0] ** (e // 2)
    sq = _sqrt_in_field(Fraction(int(const)), fld)
    out = []
    for sgn in (1, -1):
        num = (-b).map_coeffs(lambda t: fld(t)) + root.map_coeffs(lambda t: sq * t * sgn)
        out.append(exact_div(num, a * 2))
    return out


def _sqrt_in_field(c: Fraction, fld: NumberField) -> NFElement:
    """sqrt(c) inside a quadratic field, using (2t + b)^2 = b^2 - 4 c0."""
    c0, b1, _ = fld.minpoly
    disc = b1 * b1 - 4 * c0
    ratio = c / disc
    num, den = ratio.numerator, ratio.denominator
    rn, rd = math.isqrt(num) if num >= 0 else -1, math.isqrt(den)
    if num < 0 or rn * rn != num or rd * rd != den:
        raise VerificationFailed(f"sqrt({c}) is not in the character field")
    return (fld.gen * 2 + b1) * Fraction(rn, rd)
