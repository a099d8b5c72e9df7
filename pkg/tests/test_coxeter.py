import itertools
import math

import pytest
from hypothesis import given, strategies as st

from hecke_tqft.coxeter import build, parse_type
from hecke_tqft.errors import SizeGuardExceeded, UnsupportedError, ValidationError

TYPES = ["A1", "A2", "A3", "B2", "B3", "D4", "G2", "I2(5)", "I2(7)", "H3", "F4", "A4"]


def classical_order(t):
    ct = parse_type(t)
    n = ct.rank
    if ct.family == "A":
        return math.factorial(n + 1)
    if ct.family == "B":
        return 2 ** n * math.factorial(n)
    if ct.family == "D":
        return 2 ** (n - 1) * math.factorial(n)
    if ct.family == "G":
        return 12
    if ct.family == "I":
        return 2 * ct.m
    return {("H", 3): 120, ("F", 4): 1152}[(ct.family, n)]


@pytest.mark.parametrize("t", TYPES)
def test_group_order_matches_classical_formula(t):
    assert build(t).order == classical_order(t)


@pytest.mark.parametrize("t", ["A2", "B2", "G2", "A3", "H3"])
def test_length_changes_by_one_under_generators(t):
    w = build(t)
    for x in w.enumerate():
        for s in w.generators:
            assert abs(w.multiply(s, x).length - x.length) == 1


@pytest.mark.parametrize("t", ["A2", "B2", "A3", "H3"])
def test_canonical_word_round_trip(t):
    w = build(t)
    for x in w.enumerate():
        assert w.from_word(x.canonical_word) == x
        assert len(x.canonical_word) == x.length
        assert w.is_reduced(x.canonical_word)


@pytest.mark.parametrize("t", ["A2", "B2", "A3"])
def test_longest_element_length_is_positive_root_count(t):
    w = build(t)
    top = max(w.enumerate(), key=lambda x: x.length)
    assert top.length == w.inversion_count(top) == w.num_positive_roots
    assert top.left_descents() == frozenset(range(w.rank))


def test_small_examples():
    a2 = build("A2")
    assert [x.length for x in a2.enumerate()] == [0, 1, 1, 2, 2, 3]
    assert a2.from_word("121") == a2.from_word("212")
    st_ = a2.from_word("12")
    assert st_.inverse() == a2.from_word("21")
    assert a2.from_word("").inverse() == a2.identity
    assert a2.from_word("121").length == 3
    assert build("B2").from_word("1212").length == 4
    assert max(x.length for x in build("B2").enumerate()) == 4
    assert build("A1").order == 2
    assert a2.identity.left_descents() == frozenset()
    assert a2.from_word("1").left_descents() == frozenset({0})


def brute_commutator_count(w, g):
    n = w.order
    count = 0
    for tup in itertools.product(range(n), repeat=2 * g):
        x = 0
        for i in range(g):
            x = w.mul(x, w.commutator(tup[2 * i], tup[2 * i + 1]))
        count += x == 0
    return count


@pytest.mark.parametrize("t,g,want", [("A1", 1, 4), ("A2", 1, 18), ("A2", 0, 1), ("B2", 1, 40)])
def test_commutator_counts(t, g, want):
    w = build(t)
    assert w.commutator_solution_count(g) == want
    assert brute_commutator_count(w, g) == want


@pytest.mark.parametrize("t,want", [("A1", 2), ("A2", 3), ("B2", 5), ("A3", 5), ("G2", 6), ("I2(5)", 4), ("H3", 10)])
def test_class_counts(t, want):
    assert build(t).conjugacy_class_count() == want


def test_class_count_matches_commuting_pairs():
    # |{(a, b): ab = ba}| = |W| * #classes
    for t in ("A2", "B2", "G2"):
        w = build(t)
        assert w.commutator_solution_count(1) == w.order * w.conjugacy_class_count()


def brute_bruhat(w, x, y):
    # subword property on the canonical word of y
    word = y.canonical_word
    for mask in itertools.product((0, 1), repeat=len(word)):
        sub = [s for s, keep in zip(word, mask) if keep]
        if w.from_word(sub) == x:
            return True
    return False


@pytest.mark.parametrize("t", ["A2", "B2", "A3"])
def test_bruhat_matches_subword_property(t):
    w = build(t)
    for x in w.enumerate():
        for y in w.enumerate():
            assert w.bruhat_le(x, y) == brute_bruhat(w, x, y)


def test_bad_input():
    with pytest.raises(ValidationError):
        build("A2").from_word("13")
    with pytest.raises(ValidationError):
        build("A2").from_word("x")
    with pytest.raises(UnsupportedError):
        build("Q3")
    with pytest.raises(SizeGuardExceeded):
        build("E8")


def test_order_guard_env(monkeypatch):
    monkeypatch.setenv("HECKE_MAX_ORDER", "10")
    with pytest.raises(SizeGuardExceeded):
        build("A3")


@given(st.data())
def test_group_axioms(data):
    w = build(data.draw(st.sampled_from(["A2", "B2", "G2", "A3"])))
    x, y, z = (w.element(data.draw(st.integers(0, w.order - 1))) for _ in range(3))
    assert w.multiply(w.multiply(x, y), z) == w.multiply(x, w.multiply(y, z))
    assert w.multiply(x, x.inverse()) == w.identity
    assert w.multiply(w.identity, x) == x
    assert x.inverse().length == x.length
    assert w.multiply(x, y).length <= x.length + y.length
