"""Iwahori-Hecke algebras over Z[v, v^-1].

The quadratic relation is h_s^2 = (v^-1 - v) h_s + 1.  Elements are sparse
maps from group-element ids to Laurent polynomials.  Products are computed
by multiplying with one generator at a time along canonical words; the
structure-constant tensor is a separate memoized object.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import sympy

from .coxeter import CoxeterSystem, GroupElement, build
from .errors import BasisMismatch, SingularGram, SizeGuardExceeded, SystemMismatch, ValidationError
from .laurent import LaurentPoly, Q, RationalFunction, _Sparse
from .numberfield import NFElement

__all__ = [
    "HeckeAlgebra",
    "HeckeElement",
    "StructureTensor",
    "DualBasisPair",
    "algebra",
    "in_Q_basis",
]

STANDARD = "standard"
KL = "kl"

_ONE = LaurentPoly(1)
_V = LaurentPoly({1: 1})
_HINV_SHIFT = LaurentPoly({1: 1, -1: -1})  # v - v^-1, so h_s^-1 = h_s + (v - v^-1)


def _as_poly(c) -> LaurentPoly:
    if isinstance(c, LaurentPoly):
        return c
    if isinstance(c, _Sparse):
        raise TypeError(f"Hecke coefficients are polynomials in v, got {type(c).__name__}")
    return LaurentPoly(c)


class HeckeElement:
    """Element of the Hecke algebra of ``system``.

    ``coords`` maps element ids to nonzero Laurent polynomials; ``basis`` is
    "standard" or "kl" and says which basis the coordinates refer to.
    """

    __slots__ = ("system", "coords", "basis")

    def __init__(self, system: CoxeterSystem, coords=None, basis: str = STANDARD):
        self.system = system
        self.basis = basis
        if coords is None:
            self.coords = {}
        else:
            self.coords = {int(w): _as_poly(c) for w, c in coords.items() if c != 0}

    @classmethod
    def _raw(cls, system, coords, basis=STANDARD):
        obj = cls.__new__(cls)
        obj.system = system
        obj.coords = coords
        obj.basis = basis
        return obj

    @property
    def algebra(self) -> "HeckeAlgebra":
        return algebra(self.system)

    # -- linear structure ----------------------------------------------
    def _check(self, other):
        if other.system is not self.system:
            raise SystemMismatch("Hecke elements of different systems")
        if other.basis != self.basis:
            raise BasisMismatch(f"cannot combine {self.basis} and {other.basis} coordinates")

    def __add__(self, other):
        if not isinstance(other, HeckeElement):
            if isinstance(other, (int, Fraction, NFElement, LaurentPoly)):
                other = self.algebra.scalar(other, basis=self.basis)
            else:
                return NotImplemented
        self._check(other)
        out = dict(self.coords)
        for w, c in other.coords.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return HeckeElement._raw(self.system, out, self.basis)

    __radd__ = __add__

    def __neg__(self):
        return HeckeElement._raw(self.system, {w: -c for w, c in self.coords.items()}, self.basis)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if c == 0:
            return HeckeElement._raw(self.system, {}, self.basis)
        if isinstance(c, (int, Fraction, NFElement)):
            return HeckeElement._raw(self.system, {w: x * c for w, x in self.coords.items()}, self.basis)
        c = _as_poly(c)
        out = {}
        for w, x in self.coords.items():
            y = x * c
            if y:
                out[w] = y
        return HeckeElement._raw(self.system, out, self.basis)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return self.algebra.multiply(self, other)
        if isinstance(other, (int, Fraction, NFElement, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, NFElement, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = self.algebra.one()
        base = self.to_standard()
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, HeckeElement):
            if other.system is not self.system:
                return False
            if other.basis != self.basis:
                return self.to_standard().coords == other.to_standard().coords
            return self.coords == other.coords
        if isinstance(other, (int, LaurentPoly)):
            return self == self.algebra.scalar(other, basis=self.basis)
        return NotImplemented

    def __hash__(self):
        return hash((self.basis, frozenset(self.coords)))

    def is_zero(self):
        return not self.coords

    def __bool__(self):
        return bool(self.coords)

    def __len__(self):
        return len(self.coords)

    def coeff(self, w) -> LaurentPoly:
        w = w.id if isinstance(w, GroupElement) else w
        return self.coords.get(w, LaurentPoly())

    def __getitem__(self, w):
        return self.coeff(w)

    def support(self):
        return sorted(self.coords)

    # -- conversions ---------------------------------------------------
    def to_standard(self) -> "HeckeElement":
        if self.basis == STANDARD:
            return self
        return self.algebra.from_kl(self)

    def to_kl(self) -> "HeckeElement":
        if self.basis == KL:
            return self
        return self.algebra.to_kl(self)

    # -- maps ----------------------------------------------------------
    def trace(self) -> LaurentPoly:
        return self.algebra.trace(self)

    def bar(self):
        return self.algebra.bar_involution(self)

    def sigma(self):
        return self.algebra.anti_involution_sigma(self)

    def gamma(self):
        return self.algebra.gamma_map(self)

    def mul_right_gen(self, s: int) -> "HeckeElement":
        return self.algebra.right_gen(self, s)

    def mul_left_gen(self, s: int) -> "HeckeElement":
        return self.algebra.left_gen(self, s)

    # -- formatting ----------------------------------------------------
    def __repr__(self):
        if not self.coords:
            return "0"
        letter = "h" if self.basis == STANDARD else "b"
        parts = []
        for w in sorted(self.coords):
            word = self.system.word_str(w) or "e"
            parts.append(f"({self.coords[w]})*{letter}_{word}")
        return " + ".join(parts)

    def to_json(self):
        return {
            "basis": self.basis,
            "terms": [{"word": self.system.word_str(w), "coef": self.coords[w].to_json()}
                      for w in sorted(self.coords)],
        }

    @classmethod
    def from_json(cls, system, data):
        basis = data.get("basis", STANDARD)
        if basis not in (STANDARD, KL):
            raise ValidationError(f"unknown basis {basis!r}")
        coords = {}
        for t in data["terms"]:
            w = system.from_word(t["word"]).id
            coef = t.get("coef", {"var": "v", "terms": [{"exp": 0, "coef": "1"}]})
            c = LaurentPoly.from_json(coef) if isinstance(coef, dict) else LaurentPoly.parse(str(coef))
            coords[w] = coords.get(w, LaurentPoly()) + c
        return cls(system, coords, basis)


def in_Q_basis(p: LaurentPoly) -> dict:
    """Coefficients a_n with p = sum a_n Q^n, Q = v^-1 - v.

    Raises ValueError when p is not a polynomial in Q.
    """
    out = {}
    rest = p
    while rest:
        n = -rest.low_degree()
        if n < 0:
            raise ValueError(f"{p} is not a polynomial in v^-1 - v")
        a = rest.coeff(-n)
        out[n] = a
        rest = rest - (Q ** n) * a
    return out


class HeckeAlgebra:
    """Caches and operations attached to one Coxeter system."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.order = system.order
        self._kl = {0: {0: _ONE}}
        self._bar_images = {0: {0: _ONE}}
        self._gamma_images = {0: {0: _ONE}}
        self._tensor = None

    def __repr__(self):
        return f"HeckeAlgebra({self.system.type})"

    # -- constructors --------------------------------------------------
    def one(self) -> HeckeElement:
        return HeckeElement._raw(self.system, {0: _ONE})

    def zero(self, basis=STANDARD) -> HeckeElement:
        return HeckeElement._raw(self.system, {}, basis)

    def scalar(self, c, basis=STANDARD) -> HeckeElement:
        c = _as_poly(c)
        return HeckeElement._raw(self.system, {0: c} if c else {}, basis)

    def h(self, w) -> HeckeElement:
        """Standard basis element h_w; w may be an id, a GroupElement or a word."""
        return HeckeElement._raw(self.system, {self._id(w): _ONE})

    standard_basis_element = h

    def b(self, w) -> HeckeElement:
        """Kazhdan-Lusztig basis element b_w in standard coordinates."""
        return HeckeElement._raw(self.system, dict(self._kl_coords(self._id(w))))

    kl_basis_element = b

    def _id(self, w) -> int:
        if isinstance(w, GroupElement):
            if w.system is not self.system:
                raise SystemMismatch("group element of a different system")
            return w.id
        if isinstance(w, str):
            return self.system.from_word(w).id
        return int(w)

    def element(self, terms: dict, basis=STANDARD) -> HeckeElement:
        """Build from {word-or-id: coefficient}."""
        coords = {}
        for w, c in terms.items():
            i = self._id(w)
            coords[i] = coords.get(i, LaurentPoly()) + _as_poly(c)
        return HeckeElement(self.system, coords, basis)

    def random_element(self, rng: random.Random, terms: int = 4, spread: int = 2, coef: int = 3):
        coords = {}
        for _ in range(terms):
            w = rng.randrange(self.order)
            p = LaurentPoly({rng.randint(-spread, spread): rng.randint(-coef, coef) for _ in range(2)})
            coords[w] = coords.get(w, LaurentPoly()) + p
        return HeckeElement(self.system, coords)

    # -- products ------------------------------------------------------
    def right_gen(self, a: HeckeElement, s: int) -> HeckeElement:
        """a * h_s."""
        return HeckeElement._raw(self.system, self._right_gen(a.coords, s))

    def left_gen(self, a: HeckeElement, s: int) -> HeckeElement:
        """h_s * a."""
        return HeckeElement._raw(self.system, self._left_gen(a.coords, s))

    def _right_gen(self, coords: dict, s: int) -> dict:
        table = self.system.right[s]
        lengths = self.system.lengths
        out = {}
        get = out.get
        for w, c in coords.items():
            ws = table[w]
            if lengths[ws] > lengths[w]:
                x = get(ws)
                out[ws] = c if x is None else x + c
            else:
                x = get(w)
                qc = Q * c
                out[w] = qc if x is None else x + qc
                x = get(ws)
                out[ws] = c if x is None else x + c
        return {w: c for w, c in out.items() if c}

    def _left_gen(self, coords: dict, s: int) -> dict:
        table = self.system.left[s]
        lengths = self.system.lengths
        out = {}
        get = out.get
        for w, c in coords.items():
            sw = table[w]
            if lengths[sw] > lengths[w]:
                x = get(sw)
                out[sw] = c if x is None else x + c
            else:
                x = get(w)
                qc = Q * c
                out[w] = qc if x is None else x + qc
                x = get(sw)
                out[sw] = c if x is None else x + c
        return {w: c for w, c in out.items() if c}

    def _mul_coords(self, a: dict, b: dict) -> dict:
        if not a or not b:
            return {}
        words = self.system.words
        out = {}
        if len(b) <= len(a):
            # right-multiply a by h_u for each u in supp(b), sharing word prefixes
            cache = {0: a}

            def times(u):
                hit = cache.get(u)
                if hit is None:
                    word = words[u]
                    prefix = self.system.right[word[-1]][u]
                    hit = self._right_gen(times(prefix), word[-1])
                    cache[u] = hit
                return hit

            for u, d in b.items():
                _accumulate(out, times(u), d)
        else:
            cache = {0: b}

            def times(u):
                hit = cache.get(u)
                if hit is None:
                    word = words[u]
                    suffix = self.system.left[word[0]][u]
                    hit = self._left_gen(times(suffix), word[0])
                    cache[u] = hit
                return hit

            for u, d in a.items():
                _accumulate(out, times(u), d)
        return {w: c for w, c in out.items() if c}

    def multiply(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        if a.system is not self.system or b.system is not self.system:
            raise SystemMismatch("Hecke elements of different systems")
        if a.basis != STANDARD or b.basis != STANDARD:
            raise BasisMismatch("multiply needs standard coordinates; call to_standard() first")
        return HeckeElement._raw(self.system, self._mul_coords(a.coords, b.coords))

    def product(self, *factors) -> HeckeElement:
        out = self.one()
        for f in factors:
            out = self.multiply(out, f.to_standard())
        return out

    def h_product(self, x: int, y: int) -> dict:
        """Coordinates of h_x h_y."""
        return self._mul_coords({x: _ONE}, {y: _ONE})

    # -- trace ---------------------------------------------------------
    def trace(self, a: HeckeElement) -> LaurentPoly:
        a = a.to_standard()
        return a.coords.get(0, LaurentPoly())

    def trace_pair(self, a: HeckeElement, b: HeckeElement) -> LaurentPoly:
        """tr(a b) computed from tr(h_x h_y) = delta_{x, y^-1} without multiplying."""
        a, b = a.to_standard(), b.to_standard()
        inv = self.system.inv
        total = LaurentPoly()
        small, big = (a, b) if len(a.coords) <= len(b.coords) else (b, a)
        for w, c in small.coords.items():
            d = big.coords.get(inv[w])
            if d is not None:
                total = total + c * d
        return total

    def structure_constant(self, x, y, z) -> LaurentPoly:
        """c_xyz = tr(h_x h_y h_z)."""
        x, y, z = self._id(x), self._id(y), self._id(z)
        return self.h_product(x, y).get(self.system.inv[z], LaurentPoly())

    @property
    def tensor(self) -> "StructureTensor":
        if self._tensor is None:
            self._tensor = StructureTensor(self)
        return self._tensor

    def build_structure_tensor(self, eager: bool = True, guard: int = 400) -> "StructureTensor":
        t = self.tensor
        if eager:
            if self.order > guard:
                raise SizeGuardExceeded(f"eager structure tensor for |W| = {self.order} exceeds guard {guard}")
            t.build_all()
        return t

    # -- involutions ---------------------------------------------------
    def inverse_of_basis(self, w) -> HeckeElement:
        """(h_w)^-1 = h_{s_k}^-1 ... h_{s_1}^-1 for w = s_1 ... s_k."""
        w = self._id(w)
        coords = {0: _ONE}
        for s in reversed(self.system.words[w]):
            coords = _add_coords(self._right_gen(coords, s), {k: c * _HINV_SHIFT for k, c in coords.items()})
        return HeckeElement._raw(self.system, coords)

    def _images(self, w: int, store: dict, gen_image) -> dict:
        hit = store.get(w)
        if hit is not None:
            return hit
        word = self.system.words[w]
        prefix = self.system.right[word[-1]][w]
        base = self._images(prefix, store, gen_image)
        img = self._mul_coords(base, gen_image(word[-1]))
        store[w] = img
        return img

    def _bar_gen(self, s: int) -> dict:
        g = self.system.left[s][0]
        return {g: _ONE, 0: _HINV_SHIFT}

    def _gamma_gen(self, s: int) -> dict:
        # -h_s^-1 = -h_s - (v - v^-1)
        g = self.system.left[s][0]
        return {g: LaurentPoly(-1), 0: -_HINV_SHIFT}

    def bar_involution(self, a: HeckeElement) -> HeckeElement:
        """iota: v -> v^-1 and h_w -> (h_{w^-1})^-1; a ring automorphism."""
        a = a.to_standard()
        out = {}
        for w, c in a.coords.items():
            _accumulate(out, self._images(w, self._bar_images, self._bar_gen), c.bar())
        return HeckeElement._raw(self.system, {w: c for w, c in out.items() if c})

    def anti_involution_sigma(self, a: HeckeElement) -> HeckeElement:
        """sigma(h_w) = h_{w^-1}, linear over Z[v, v^-1]."""
        a = a.to_standard()
        inv = self.system.inv
        return HeckeElement._raw(self.system, {inv[w]: c for w, c in a.coords.items()})

    def gamma_map(self, a: HeckeElement) -> HeckeElement:
        """The algebra automorphism h_s -> -h_s^-1, linear over Z[v, v^-1].

        This is the transport to the h_s normalization of T_s -> -q T_s^-1;
        composing a representation with it gives the dual representation.
        """
        a = a.to_standard()
        out = {}
        for w, c in a.coords.items():
            _accumulate(out, self._images(w, self._gamma_images, self._gamma_gen), c)
        return HeckeElement._raw(self.system, {w: c for w, c in out.items() if c})

    # -- Kazhdan-Lusztig basis -----------------------------------------
    def _kl_coords(self, w: int) -> dict:
        hit = self._kl.get(w)
        if hit is not None:
            return hit
        system = self.system
        lengths = system.lengths
        for u in range(1, w + 1):  # ids are ordered by length
            if u in self._kl:
                continue
            s = system.words[u][0]
            prev = system.left[s][u]
            bprev = self._kl[prev]
            # b_s b_prev = h_s b_prev + v b_prev
            coords = _add_coords(self._left_gen(bprev, s), {k: c * _V for k, c in bprev.items()})
            # subtract mu(z, prev) b_z for z < prev with sz < z
            for z in sorted(bprev, key=lambda k: -lengths[k]):
                if z == prev:
                    continue
                if lengths[system.left[s][z]] > lengths[z]:
                    continue
                mu = bprev[z].coeff(1)
                if mu:
                    bz = self._kl[z]
                    coords = _add_coords(coords, {k: c * (-mu) for k, c in bz.items()})
            self._kl[u] = coords
        return self._kl[w]

    def kl_basis(self) -> list:
        return [self.b(w) for w in range(self.order)]

    def kl_polynomial(self, z, w) -> LaurentPoly:
        """h_{z,w}: the coefficient of h_z in b_w."""
        return self._kl_coords(self._id(w)).get(self._id(z), LaurentPoly())

    def from_kl(self, a: HeckeElement) -> HeckeElement:
        if a.basis == STANDARD:
            return a
        out = {}
        for w, c in a.coords.items():
            _accumulate(out, self._kl_coords(w), c)
        return HeckeElement._raw(self.system, {w: c for w, c in out.items() if c})

    def to_kl(self, a: HeckeElement) -> HeckeElement:
        """Rewrite in the KL basis by peeling off the longest support element."""
        if a.basis == KL:
            return a
        rest = dict(a.coords)
        lengths = self.system.lengths
        out = {}
        while rest:
            w = max(rest, key=lambda k: (lengths[k], k))
            c = rest[w]
            out[w] = c
            rest = _add_coords(rest, {k: x * (-c) for k, x in self._kl_coords(w).items()})
        return HeckeElement._raw(self.system, out, KL)

    # -- dual bases ----------------------------------------------------
    def standard_pair(self) -> "DualBasisPair":
        inv = self.system.inv
        basis = [self.h(w) for w in range(self.order)]
        dual = [self.h(inv[w]) for w in range(self.order)]
        return DualBasisPair(self, basis, dual, name=STANDARD, verify=False)

    def kl_pair(self) -> "DualBasisPair":
        return self.dual_basis(self.kl_basis(), name=KL)

    def dual_basis(self, basis, name: str = "custom", verify: bool = True) -> "DualBasisPair":
        """Trace-dual basis: tr(C_x C^y) = delta_xy.

        With C_x = sum_u P[u][x] h_u the dual is C^y = sum_u P^-1[y][u] h_{u^-1}.
        """
        n = self.order
        basis = [c.to_standard() for c in basis]
        if len(basis) != n:
            raise SingularGram(f"a basis needs {n} elements, got {len(basis)}")
        rows = [[b.coords.get(u) for b in basis] for u in range(n)]  # P[u][x]
        pinv = _invert_triangular(rows) if _is_unitriangular(rows) else _invert_general(rows)
        inv = self.system.inv
        dual = []
        for y in range(n):
            coords = {inv[u]: pinv[y][u] for u in range(n) if pinv[y][u]}
            dual.append(HeckeElement._raw(self.system, coords))
        return DualBasisPair(self, basis, dual, name=name, verify=verify)

    # -- Casimir elements ----------------------------------------------
    def conj_average(self, h: HeckeElement, pair: "DualBasisPair" = None) -> HeckeElement:
        """sum_w C_w h C^w; with the standard pair, via h_{sy} h h_{(sy)^-1} = h_s (h_y h h_{y^-1}) h_s."""
        h = h.to_standard()
        if pair is not None and pair.name != STANDARD:
            out = self.zero()
            for c, d in zip(pair.basis, pair.dual):
                out = out + self.multiply(self.multiply(c, h), d)
            return out
        system = self.system
        phi = {0: h.coords}
        total = {}
        _accumulate(total, h.coords, None)
        for w in range(1, self.order):
            s = system.words[w][0]
            y = system.left[s][w]
            cur = self._right_gen(self._left_gen(phi[y], s), s)
            phi[w] = cur
            _accumulate(total, cur, None)
        return HeckeElement._raw(system, {w: c for w, c in total.items() if c})

    def casimir2(self, pair: "DualBasisPair" = None) -> HeckeElement:
        """sum_w C_w C^w."""
        if pair is not None and pair.name != STANDARD:
            out = self.zero()
            for c, d in zip(pair.basis, pair.dual):
                out = out + self.multiply(c, d)
            return out
        return self._cached("_casimir2", lambda: self.conj_average(self.one()))

    def casimir4(self, pair: "DualBasisPair" = None) -> HeckeElement:
        """sum_{x,y} C_x C_y C^x C^y = sum_x C_x conj_average(C^x)."""
        if pair is not None and pair.name != STANDARD:
            out = self.zero()
            for c, d in zip(pair.basis, pair.dual):
                out = out + self.multiply(c, self.conj_average(d, pair))
            return out

        def compute():
            inv = self.system.inv
            total = {}
            for x in range(self.order):
                phi = self.conj_average(self.h(inv[x])).coords
                _accumulate(total, self._mul_coords({x: _ONE}, phi), None)
            return HeckeElement._raw(self.system, {w: c for w, c in total.items() if c})

        return self._cached("_casimir4", compute)

    def _cached(self, name, fn):
        hit = self.__dict__.get(name)
        if hit is None:
            hit = fn()
            self.__dict__[name] = hit
        return hit

    def is_central(self, z: HeckeElement) -> bool:
        z = z.to_standard()
        for s in range(self.system.rank):
            if self._left_gen(z.coords, s) != self._right_gen(z.coords, s):
                return False
        return True


class StructureTensor:
    """c_xyz = tr(h_x h_y h_z) with products h_x h_y memoized per pair."""

    def __init__(self, alg: HeckeAlgebra):
        self.algebra = alg
        self.system = alg.system
        self._prod = {}

    def product(self, x: int, y: int) -> dict:
        """Coordinates of h_x h_y, keyed by element id."""
        key = (x, y)
        hit = self._prod.get(key)
        if hit is None:
            words = self.system.words
            if y == 0:
                hit = {x: _ONE}
            else:
                word = words[y]
                prefix = self.system.right[word[-1]][y]
                hit = self.algebra._right_gen(self.product(x, prefix), word[-1])
            self._prod[key] = hit
        return hit

    def __call__(self, x, y, z) -> LaurentPoly:
        return self.get(x, y, z)

    def get(self, x, y, z) -> LaurentPoly:
        x, y, z = (self.algebra._id(a) for a in (x, y, z))
        return self.product(x, y).get(self.system.inv[z], LaurentPoly())

    def build_all(self):
        for x in range(self.system.order):
            for y in range(self.system.order):
                self.product(x, y)
        return self

    def third_labels(self, x: int, y: int) -> dict:
        """{z: c_xyz} over the nonzero entries."""
        inv = self.system.inv
        return {inv[u]: c for u, c in self.product(x, y).items()}


@dataclass
class DualBasisPair:
    algebra: HeckeAlgebra
    basis: list
    dual: list
    name: str = "custom"
    verify: bool = True

    def __post_init__(self):
        if self.verify and not self.check():
            raise SingularGram("dual basis fails tr(C_x C^y) = delta_xy")

    def check(self) -> bool:
        alg = self.algebra
        n = len(self.basis)
        for x in range(n):
            for y in range(n):
                t = alg.trace_pair(self.basis[x], self.dual[y])
                if t != (1 if x == y else 0):
                    return False
        return True

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(zip(self.basis, self.dual))


# -- helpers ---------------------------------------------------------------

def _accumulate(out: dict, coords: dict, factor):
    get = out.get
    for w, c in coords.items():
        if factor is not None:
            c = c * factor
        x = get(w)
        out[w] = c if x is None else x + c


def _add_coords(a: dict, b: dict) -> dict:
    out = dict(a)
    _accumulate(out, b, None)
    return {w: c for w, c in out.items() if c}


def _is_unitriangular(rows) -> bool:
    n = len(rows)
    for u in range(n):
        if rows[u][u] != 1:
            return False
        for x in range(u):
            if rows[u][x] is not None and rows[u][x] != 0:
                return False
    return True


def _invert_triangular(rows):
    """Inverse of an upper unitriangular matrix of Laurent polynomials."""
    n = len(rows)
    inv = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
    for j in range(n - 1, -1, -1):
        inv[j][j] = LaurentPoly(1)
        for i in range(j - 1, -1, -1):
            acc = LaurentPoly()
            for k in range(i + 1, j + 1):
                a = rows[i][k]
                if a is not None and a:
                    b = inv[k][j]
                    if b:
                        acc = acc + a * b
            inv[i][j] = -acc
    return inv


def _invert_general(rows):
    """Exact inverse over Q(v) with sympy; the result must be Laurent."""
    n = len(rows)
    vs = sympy.Symbol("v")
    dom = sympy.QQ.frac_field(vs)

    def conv(p):
        if p is None or not p:
            return dom.zero
        expr = sum(sympy.Rational(c) * vs ** e for e, c in p.terms()) if p.is_integral() else \
            sum(sympy.nsimplify(str(c)) * vs ** e for e, c in p.terms())
        return dom.from_sympy(expr)

    from sympy.polys.matrices import DomainMatrix

    mat = DomainMatrix([[conv(rows[i][j]) for j in range(n)] for i in range(n)], (n, n), dom)
    try:
        inv = mat.inv()
    except Exception as exc:  # sympy raises DMNonInvertibleMatrixError
        raise SingularGram("basis matrix is singular") from exc
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = _from_sympy_frac(inv[i, j].element, vs)
    return out


def _from_sympy_frac(f, vs) -> LaurentPoly:
    num, den = sympy.fraction(sympy.cancel(f.as_expr() if hasattr(f, "as_expr") else f))
    pden = sympy.Poly(den, vs)
    if len(pden.terms()) != 1:
        raise SingularGram("dual basis has non-Laurent coordinates")
    (dexp,), dcoef = pden.terms()[0]
    pnum = sympy.Poly(num, vs)
    terms = {}
    for (e,), c in pnum.terms():
        c = Fraction(int(c.p), int(c.q)) / Fraction(int(dcoef.p), int(dcoef.q))
        if c.denominator != 1:
            raise SingularGram("dual basis has non-integral coordinates")
        terms[e - dexp] = int(c)
    return LaurentPoly(terms)


_ALGEBRAS: dict = {}


def algebra(system) -> HeckeAlgebra:
    """The (cached) Hecke algebra of a system or type symbol."""
    if not isinstance(system, CoxeterSystem):
        system = build(system)
    alg = _ALGEBRAS.get(id(system))
    if alg is None or alg.system is not system:
        alg = HeckeAlgebra(system)
        _ALGEBRAS[id(system)] = alg
    return alg
