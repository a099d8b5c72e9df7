"""Finite Coxeter systems realized as permutation groups of their root systems.

A system is built once from its type symbol.  Every element gets a dense id
in the order (length, canonical word), with id 0 the identity, and the left
and right actions of the simple reflections are tabulated.  Canonical words
are lexicographically least reduced words, obtained by repeatedly stripping
the smallest left descent.
"""

from __future__ import annotations

import math
import os
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import SizeGuardExceeded, SystemMismatch, UnsupportedType, ValidationError
from .numberfield import NFElement, cos_field

__all__ = [
    "CoxeterType",
    "CoxeterSystem",
    "GroupElement",
    "parse_type",
    "build",
    "max_order",
    "DEFAULT_MAX_ORDER",
]

DEFAULT_MAX_ORDER = 1200
_REFUSED = {("H", 4), ("E", 7), ("E", 8)}


def max_order() -> int:
    """Group-order guard; the environment variable HECKE_MAX_ORDER overrides it."""
    raw = os.environ.get("HECKE_MAX_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        return int(raw)
    except ValueError as exc:
        raise ValidationError(f"HECKE_MAX_ORDER must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class CoxeterType:
    family: str
    rank: int
    m: int | None = None  # only for I2

    def __str__(self):
        if self.family == "I":
            return f"I2({self.m})"
        return f"{self.family}{self.rank}"

    @property
    def order(self) -> int:
        f, n = self.family, self.rank
        if f == "A":
            return math.factorial(n + 1)
        if f == "B":
            return 2 ** n * math.factorial(n)
        if f == "D":
            return 2 ** (n - 1) * math.factorial(n)
        if f == "I":
            return 2 * self.m
        return {("F", 4): 1152, ("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
                ("H", 3): 120, ("H", 4): 14400}[(f, n)]

    @property
    def crystallographic(self) -> bool:
        return self.family != "H" and not (self.family == "I" and self.m not in (2, 3, 4, 6))

    def coxeter_matrix(self):
        n = self.rank
        m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]

        def edge(i, j, k=3):
            m[i][j] = m[j][i] = k

        f = self.family
        if f == "A":
            for i in range(n - 1):
                edge(i, i + 1)
        elif f == "B":
            for i in range(n - 2):
                edge(i, i + 1)
            edge(n - 2, n - 1, 4)
        elif f == "D":
            for i in range(n - 2):
                edge(i, i + 1)
            edge(n - 3, n - 1)
        elif f == "I":
            edge(0, 1, self.m)
        elif f == "F":
            edge(0, 1)
            edge(1, 2, 4)
            edge(2, 3)
        elif f == "E":
            edge(0, 2)
            edge(2, 3)
            edge(3, 4)
            edge(1, 3)
            for i in range(4, n - 1):
                edge(i, i + 1)
        elif f == "H":
            edge(0, 1, 5)
            for i in range(1, n - 1):
                edge(i, i + 1)
        return m


_TYPE_RE = re.compile(r"^\s*([A-Za-z])\s*(\d+)\s*(?:\(\s*(\d+)\s*\))?\s*$")


def parse_type(text) -> CoxeterType:
    """Parse "A3", "B2", "D4", "I2(7)", "G2", "F4", "E6" or "H3"."""
    if isinstance(text, CoxeterType):
        return text
    mt = _TYPE_RE.match(str(text))
    if not mt:
        raise ValidationError(f"cannot parse Coxeter type {text!r}")
    fam, rank, param = mt.group(1).upper(), int(mt.group(2)), mt.group(3)
    if fam == "G" and rank == 2 and param is None:
        return CoxeterType("I", 2, 6)
    if fam == "I":
        if rank != 2 or param is None:
            raise ValidationError(f"dihedral types are written I2(m), got {text!r}")
        m = int(param)
        if m < 2:
            raise UnsupportedType(f"I2({m}) needs m >= 2")
        return CoxeterType("I", 2, m)
    if param is not None:
        raise ValidationError(f"unexpected parameter in {text!r}")
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "D": rank >= 4,
        "F": rank == 4,
        "E": rank in (6, 7, 8),
        "H": rank in (3, 4),
    }
    if not ok.get(fam, False):
        raise UnsupportedType(f"unsupported Coxeter type {text!r}")
    return CoxeterType(fam, rank)


def _cartan(ct: CoxeterType):
    """Cartan-like matrix a[i][j] with s_i(alpha_j) = alpha_j - a[i][j] alpha_i."""
    mat = ct.coxeter_matrix()
    n = ct.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    field = None
    if not ct.crystallographic:
        big = [mat[i][j] for i in range(n) for j in range(n) if mat[i][j] not in (1, 2, 3, 4, 6)]
        field = cos_field(2 * math.lcm(*big))
    for i in range(n):
        for j in range(i + 1, n):
            mij = mat[i][j]
            if mij == 2:
                continue
            if mij == 3:
                a[i][j] = a[j][i] = -1
            elif field is None:
                # long root first: a[i][j] * a[j][i] = 4 cos^2(pi/m)
                a[i][j], a[j][i] = -1, -(2 if mij == 4 else 3)
            else:
                # symmetric form with entries -2 cos(pi/m)
                order = 2 * math.lcm(*big)
                g, k = field.gen, order // (2 * mij)
                t0, t1 = field(2), g
                for _ in range(k - 1):
                    t0, t1 = t1, t1 * g - t0
                c = t1 if k >= 1 else t0
                a[i][j] = a[j][i] = -c
    return a, field


class GroupElement:
    """An element of a built :class:`CoxeterSystem`, addressed by its dense id."""

    __slots__ = ("system", "id")

    def __init__(self, system: "CoxeterSystem", id: int):
        self.system = system
        self.id = id

    @property
    def word(self) -> tuple:
        """Canonical reduced word as a tuple of 0-based generator indices."""
        return self.system.words[self.id]

    @property
    def canonical_word(self) -> tuple:
        return self.word

    @property
    def word_str(self) -> str:
        return self.system.word_str(self.id)

    @property
    def length(self) -> int:
        return self.system.lengths[self.id]

    def __len__(self):
        return self.length

    @property
    def root_permutation(self) -> tuple:
        return self.system.root_permutation(self.id)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.system, self.system.inv[self.id])

    def left_descents(self) -> frozenset:
        return self.system.left_descents(self.id)

    def right_descents(self) -> frozenset:
        return self.system.right_descents(self.id)

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.system is not self.system:
            raise SystemMismatch("elements belong to different Coxeter systems")
        return GroupElement(self.system, self.system.mul(self.id, other.id))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and other.system is self.system and other.id == self.id

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return f"GroupElement({self.system.type}, {self.word_str or 'e'})"


class CoxeterSystem:
    """A finite Coxeter system with every element enumerated.

    Attributes of interest: ``order``, ``rank``, ``words`` (canonical words
    by id), ``lengths``, ``inv``, ``left[s][w]`` and ``right[s][w]`` (ids of
    sw and ws).
    """

    def __init__(self, ct: CoxeterType):
        self.type = ct
        self.rank = ct.rank
        self.coxeter_matrix = ct.coxeter_matrix()
        self._build_roots()
        self._enumerate()

    # -- root system ---------------------------------------------------
    def _build_roots(self):
        n = self.rank
        a, self.field = _cartan(self.type)
        self.cartan = a
        zero = 0
        simple = []
        for i in range(n):
            simple.append(tuple(1 if j == i else zero for j in range(n)))

        def reflect(i, beta):
            c = sum(a[i][j] * beta[j] for j in range(n))
            if c == 0:
                return beta
            out = list(beta)
            out[i] = out[i] - c
            return tuple(out)

        index = {}
        roots = []
        frontier = []
        for r in simple:
            index[r] = len(roots)
            roots.append(r)
            frontier.append(r)
        while frontier:
            nxt = []
            for beta in frontier:
                for i in range(n):
                    g = reflect(i, beta)
                    if g not in index:
                        index[g] = len(roots)
                        roots.append(g)
                        nxt.append(g)
                        if len(roots) > 100000:
                            raise UnsupportedType(f"{self.type}: root system does not close")
            frontier = nxt
        # add negatives (closure above only reaches positive roots from simple ones
        # together with -alpha_i, so make the set symmetric explicitly)
        for beta in list(roots):
            neg = tuple(-x for x in beta)
            if neg not in index:
                index[neg] = len(roots)
                roots.append(neg)
        self.roots = roots
        self.root_index = index
        self.positive = [self._is_positive(r) for r in roots]
        self.num_positive_roots = sum(self.positive)
        self.simple_index = [index[r] for r in simple]
        self.neg_index = [index[tuple(-x for x in r)] for r in roots]
        self.reflection_perm = [[index[reflect(i, r)] for r in roots] for i in range(n)]

    @staticmethod
    def _is_positive(beta) -> bool:
        for x in beta:
            if x != 0:
                return (x.sign() if isinstance(x, NFElement) else (1 if x > 0 else -1)) > 0
        raise AssertionError("zero root")

    # -- enumeration ---------------------------------------------------
    def _enumerate(self):
        n = self.rank
        perms = self.reflection_perm
        start = tuple(self.simple_index)
        key_id = {start: 0}
        keys = [start]
        dist = [0]
        left = [[] for _ in range(n)]
        head = 0
        while head < len(keys):
            key = keys[head]
            for s in range(n):
                ps = perms[s]
                nk = tuple(ps[r] for r in key)
                j = key_id.get(nk)
                if j is None:
                    j = len(keys)
                    key_id[nk] = j
                    keys.append(nk)
                    dist.append(dist[head] + 1)
            head += 1
        total = len(keys)
        left = [[key_id[tuple(perms[s][r] for r in k)] for k in keys] for s in range(n)]
        order = range(total)
        by_len = sorted(order, key=lambda w: dist[w])
        words = [None] * total
        words[0] = ()
        for w in by_len[1:]:
            for s in range(n):
                u = left[s][w]
                if dist[u] < dist[w]:
                    words[w] = (s,) + words[u]
                    break
        perm = sorted(order, key=lambda w: (dist[w], words[w]))
        new_id = [0] * total
        for new, old in enumerate(perm):
            new_id[old] = new
        self.order = total
        self.words = [words[old] for old in perm]
        self.lengths = [dist[old] for old in perm]
        self._keys = [keys[old] for old in perm]
        self.left = [[new_id[left[s][old]] for old in perm] for s in range(n)]
        self.word_index = {w: i for i, w in enumerate(self.words)}
        inv = [0] * total
        for w, word in enumerate(self.words):
            x = 0
            for s in word:
                x = self.left[s][x]
            inv[w] = x
        self.inv = inv
        self.right = [[inv[self.left[s][inv[w]]] for w in range(total)] for s in range(n)]
        self.longest = total - 1
        if self.lengths[self.longest] != self.num_positive_roots:
            raise AssertionError("longest length differs from the number of positive roots")

    # -- queries -------------------------------------------------------
    def __repr__(self):
        return f"CoxeterSystem({self.type}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self, 0)

    def element(self, id: int) -> GroupElement:
        return GroupElement(self, id)

    def generator(self, s: int) -> GroupElement:
        """The simple reflection with 0-based index s."""
        return GroupElement(self, self.left[s][0])

    @property
    def generators(self):
        return [self.generator(s) for s in range(self.rank)]

    def __iter__(self) -> Iterator[GroupElement]:
        return (GroupElement(self, i) for i in range(self.order))

    def enumerate(self) -> Iterator[GroupElement]:
        return iter(self)

    def mul(self, x: int, y: int) -> int:
        right = self.right
        for s in self.words[y]:
            x = right[s][x]
        return x

    def multiply(self, w: GroupElement, u: GroupElement) -> GroupElement:
        return w * u

    def inverse(self, w: GroupElement) -> GroupElement:
        return w.inverse()

    def length(self, w) -> int:
        return self.lengths[_id(w)]

    def left_descents(self, w) -> frozenset:
        w = _id(w)
        lw = self.lengths[w]
        return frozenset(s for s in range(self.rank) if self.lengths[self.left[s][w]] < lw)

    def right_descents(self, w) -> frozenset:
        w = _id(w)
        lw = self.lengths[w]
        return frozenset(s for s in range(self.rank) if self.lengths[self.right[s][w]] < lw)

    def root_permutation(self, w) -> tuple:
        """Action of w on the root indices."""
        w = _id(w)
        perm = list(range(len(self.roots)))
        for s in reversed(self.words[w]):
            ps = self.reflection_perm[s]
            perm = [ps[r] for r in perm]
        return tuple(perm)

    def inversion_count(self, w) -> int:
        perm = self.root_permutation(w)
        return sum(1 for r, img in enumerate(perm) if self.positive[r] and not self.positive[img])

    def word_str(self, w) -> str:
        return "".join(str(s + 1) for s in self.words[_id(w)])

    def from_word(self, word) -> GroupElement:
        """Multiply out a word: a digit string over 1..rank, or a sequence of 0-based ints."""
        if isinstance(word, str):
            text = word.strip()
            if text in ("", "e"):
                return self.identity
            if not text.isdigit():
                raise ValidationError(f"bad word {word!r}: expected digits 1..{self.rank}")
            letters = [int(c) - 1 for c in text]
        else:
            letters = list(word)
        x = 0
        for s in letters:
            if not 0 <= s < self.rank:
                raise ValidationError(f"bad word {word!r}: generator out of range 1..{self.rank}")
            x = self.right[s][x]
        return GroupElement(self, x)

    def is_reduced(self, word) -> bool:
        letters = [int(c) - 1 for c in word] if isinstance(word, str) else list(word)
        return self.lengths[self.from_word(word).id] == len(letters)

    def bruhat_le(self, x, w) -> bool:
        """Bruhat order test via the lifting property along left descents."""
        return self._bruhat(_id(x), _id(w))

    @cached_property
    def _bruhat_cache(self):
        return {}

    def _bruhat(self, x: int, w: int) -> bool:
        lx, lw = self.lengths[x], self.lengths[w]
        if lx > lw:
            return False
        if lx == lw:
            return x == w
        if x == 0:
            return True
        key = (x, w)
        cache = self._bruhat_cache
        hit = cache.get(key)
        if hit is not None:
            return hit
        s = self.words[w][0]
        sw = self.left[s][w]
        sx = self.left[s][x]
        res = self._bruhat(sx if self.lengths[sx] < lx else x, sw)
        cache[key] = res
        return res

    # -- conjugacy -----------------------------------------------------
    @cached_property
    def conjugacy_classes(self) -> list:
        """Classes as sorted id lists, ordered by their smallest id."""
        seen = [-1] * self.order
        classes = []
        for w in range(self.order):
            if seen[w] >= 0:
                continue
            cls = [w]
            seen[w] = len(classes)
            head = 0
            while head < len(cls):
                x = cls[head]
                for s in range(self.rank):
                    y = self.left[s][self.right[s][x]]
                    if seen[y] < 0:
                        seen[y] = len(classes)
                        cls.append(y)
                head += 1
            classes.append(sorted(cls))
        return classes

    def conjugacy_class_count(self) -> int:
        return len(self.conjugacy_classes)

    def commutator(self, a: int, b: int) -> int:
        """Id of a b a^-1 b^-1."""
        inv = self.inv
        return self.mul(self.mul(self.mul(a, b), inv[a]), inv[b])

    def commutator_solution_count(self, g: int, guard: int = 10 ** 7) -> int:
        """Number of 2g-tuples (a_1, b_1, ..., a_g, b_g) with prod [a_i, b_i] = e.

        Counts pairs by their commutator once, then convolves g times.
        """
        if g < 0:
            raise ValidationError("genus must be non-negative")
        if g == 0:
            return 1
        if self.order ** 2 > guard:
            raise SizeGuardExceeded(f"|W|^2 = {self.order ** 2} exceeds the brute-force guard {guard}")
        dist = Counter(self.commutator(a, b) for a in range(self.order) for b in range(self.order))
        acc = {0: 1}
        for _ in range(g):
            nxt = Counter()
            for x, cx in acc.items():
                for y, cy in dist.items():
                    nxt[self.mul(x, y)] += cx * cy
            acc = nxt
        return acc.get(0, 0)


def _id(w) -> int:
    return w.id if isinstance(w, GroupElement) else int(w)


_CACHE: dict = {}


def build(type_symbol, max_order_override: int | None = None) -> CoxeterSystem:
    """Build (or fetch from cache) the Coxeter system of the given type.

    Types with more than ``max_order()`` elements are refused; H4, E7 and E8
    are refused unconditionally.
    """
    ct = parse_type(type_symbol)
    if (ct.family, ct.rank) in _REFUSED:
        raise SizeGuardExceeded(f"{ct} (order {ct.order}) is deliberately not constructible")
    limit = max_order_override if max_order_override is not None else max_order()
    if ct.order > limit:
        raise SizeGuardExceeded(f"{ct} has order {ct.order} > guard {limit}; raise HECKE_MAX_ORDER")
    if ct not in _CACHE:
        system = CoxeterSystem(ct)
        if system.order != ct.order:
            raise AssertionError(f"{ct}: enumerated {system.order} elements, expected {ct.order}")
        _CACHE[ct] = system
    return _CACHE[ct]
