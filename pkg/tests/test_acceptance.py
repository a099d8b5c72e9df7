"""Acceptance criteria 1-8.

Each criterion is a list of named sub-checks.  The test prints one line
``criterion N: PASS|FAIL`` followed by the failing sub-checks, then asserts.
Run ``python tests/test_acceptance.py`` for the eight lines alone.

Set HECKE_ENABLE_H3=1 to add the H3 Schur-table checks to criterion 6.
"""

from __future__ import annotations

import os
import random
import sys
import time
from fractions import Fraction

import pytest

from hecke_tqft.center import (
    central_decomposition,
    closed_form_table,
    schur_multiset_duality_check,
)
from hecke_tqft.corpus import CORPUS, a1_family, a2_family, check_entry, g2_family, sphere_triangle_family
from hecke_tqft.coxeter import build
from hecke_tqft.errors import ComputeGuardExceeded
from hecke_tqft.hecke import algebra, in_Q_basis
from hecke_tqft.laurent import LaurentPoly, QView, analyze, to_q_view
from hecke_tqft.surfaces import (
    CiliatedSurface,
    analyze_invariant,
    invariant,
    invariant_statesum,
    random_flips,
    sphere_minus_triangle,
    triangulation,
)

# (type, genus, punctures, boundaries) -> value, shared with criterion 7
COMPUTED: dict = {}


def _record(t, s, value):
    if s.is_punctured() and not s.boundaries:
        COMPUTED[(t, s.genus, s.punctures)] = value
    return value


def _trace(t, g, k):
    key = (t, g, k)
    if key not in COMPUTED:
        s = CiliatedSurface(g, k)
        _record(t, s, invariant(s, build(t), "trace"))
    return COMPUTED[key]


class Checks:
    def __init__(self, budget: float):
        self.items = []
        self.budget = budget
        self.start = time.perf_counter()

    def add(self, name, ok, detail=""):
        self.items.append((name, bool(ok), detail))

    def finish(self):
        elapsed = time.perf_counter() - self.start
        self.add(f"time {elapsed:.1f}s within {self.budget:.0f}s", elapsed <= self.budget)
        return self


# -- 1 -------------------------------------------------------------------------

def criterion_1():
    c = Checks(60)
    names = {
        "P_{0,3,A1}", "P_{1,1,A1}", "P_{0,4,A1}", "P_{0,3,A2}", "P_{1,1,A2}", "P_{0,4,A2}",
        "P_{0,3,A3}", "P_{0,3,G2}",
        "P_{0,2,A1}", "P_{0,2,A2}", "P_{0,2,B2}", "P_{0,1,A1}", "P_{0,1,A2}", "P_{0,1,B2}",
    }
    entries = [e for e in CORPUS if e.name in names]
    c.add("all corpus entries present", len(entries) == len(names))
    for e in entries:
        r = check_entry(e)
        c.add(e.name, r.passed, r.detail)
        if r.passed and not e.formal:
            system, s = e.surface()
            _record(e.type, s, invariant(s, system, "trace"))
        if e.name == "P_{0,3,G2}":
            c.add("G2 prefix has a negative coefficient", "- 18" in r.value)
    a2 = to_q_view(_trace("A2", 0, 4))
    c.add("P_{0,4,A2} equals the A2 formula at m=2", a2 == a2_family(0, 4))
    return c.finish()


# -- 2 -------------------------------------------------------------------------

def criterion_2():
    c = Checks(60)
    a1 = build("A1")
    for g in range(0, 5):
        for k in range(0, 11):
            m = 2 * g - 2 + k
            if not 1 <= m <= 8:
                continue
            if k == 0:
                got = invariant(CiliatedSurface.formal(g, 0), a1, "schur")
            else:
                got = _trace("A1", g, k)
            c.add(f"A1 ({g},{k})", to_q_view(got) == a1_family(g, k))
    for t, fam in (("A2", a2_family), ("G2", g2_family)):
        for g in range(0, 3):
            for k in range(1, 7):
                m = 2 * g - 2 + k
                if 1 <= m <= 4:
                    c.add(f"{t} ({g},{k})", to_q_view(_trace(t, g, k)) == fam(g, k))
    e, s = 0, 1
    for k in range(3, 9):
        table = sphere_minus_triangle(a1, k)
        for lab, key in (("eee", (e, e, e)), ("see", (s, e, e)), ("sse", (s, s, e)), ("sss", (s, s, s))):
            c.add(f"sphere minus triangle {lab}, k={k}",
                  table.get(key, LaurentPoly()) == sphere_triangle_family(lab, k))
    return c.finish()


# -- 3 -------------------------------------------------------------------------

PIPELINE_TYPES = ["A1", "A2", "B2", "I2(5)", "G2"]
PIPELINE_SURFACES = [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)]


def criterion_3():
    c = Checks(600)
    for t in PIPELINE_TYPES:
        system = build(t)
        state_summed = set()
        for g, k in PIPELINE_SURFACES:
            s = CiliatedSurface(g, k)
            values = {}
            for method in ("state-sum", "polygon", "trace", "schur"):
                try:
                    values[method] = invariant(s, system, method)
                except ComputeGuardExceeded:
                    continue
            if "state-sum" in values:
                state_summed.add((g, k))
            agree = len({str(v) for v in values.values()}) == 1
            c.add(f"{t} ({g},{k}) {'='.join(sorted(values))}", agree and len(values) >= 3)
            _record(t, s, values["trace"])
        c.add(f"{t} state-summed (0,3) and (1,1)", {(0, 3), (1, 1)} <= state_summed)
    return c.finish()


# -- 4 -------------------------------------------------------------------------

def criterion_4():
    c = Checks(300)
    rng = random.Random(2024)
    for t in ("A1", "A2", "B2", "A3"):
        system = build(t)
        alg = algebra(system)
        tensor = alg.tensor
        inv = system.inv
        n = system.order
        cyclic = reverse = qpos = True
        for x in range(n):
            for y in range(n):
                for z, cxyz in tensor.third_labels(x, y).items():
                    if tensor.get(y, z, x) != cxyz or tensor.get(z, x, y) != cxyz:
                        cyclic = False
                    if tensor.get(inv[z], inv[y], inv[x]) != cxyz:
                        reverse = False
                    if any(a < 0 for a in in_Q_basis(cxyz).values()):
                        qpos = False
                # zero entries must stay zero under the symmetries
                support = tensor.third_labels(x, y)
                for z in range(n):
                    if z not in support and tensor.get(y, z, x):
                        cyclic = False
        c.add(f"{t} cyclic symmetry", cyclic)
        c.add(f"{t} orientation reversal", reverse)
        c.add(f"{t} Q-nonnegative structure constants", qpos and system.type.crystallographic)
        flips_ok = True
        for _ in range(1000):
            x, y, z, u = (rng.randrange(n) for _ in range(4))
            left = sum((tensor.get(x, y, w) * tensor.get(inv[w], z, u) for w in range(n)), LaurentPoly())
            right = sum((tensor.get(y, z, w) * tensor.get(x, inv[w], u) for w in range(n)), LaurentPoly())
            flips_ok &= left == right
        c.add(f"{t} flip identity on 1000 quadruples", flips_ok)
    return c.finish()


# -- 5 -------------------------------------------------------------------------

CENTER_TYPES = ["A1", "A2", "B2", "A3", "I2(5)", "G2", "B3"]


def criterion_5():
    c = Checks(600)
    rng = random.Random(17)
    for t in CENTER_TYPES:
        system = build(t)
        d = central_decomposition(system, products=False)
        alg = d.algebra
        n = len(d)
        svs = [d.schur_v(i) for i in range(n)]
        products = True
        for i in range(n):
            for j in range(i, n):
                p = d.Z[i] * d.Z[j]
                products &= p == (d.Z[i].scale(svs[i]) if i == j else alg.zero())
        c.add(f"{t} Z products", products)
        # sum Z / s = 1, multiplied through by the product of all s
        full = LaurentPoly(1)
        for s in svs:
            full = full * s
        total = alg.zero()
        for i in range(n):
            others = LaurentPoly(1)
            for j in range(n):
                if j != i:
                    others = others * svs[j]
            total = total + d.Z[i].scale(others)
        c.add(f"{t} sum Z/s = 1", total == alg.scalar(full))
        c.add(f"{t} tr Z = dim", all(alg.trace(d.Z[i]) == d.dims[i] for i in range(n)))
        c2 = alg.zero()
        c4 = alg.zero()
        for i in range(n):
            c2 = c2 + d.Z[i].scale(d.dims[i])
            c4 = c4 + d.Z[i].scale(svs[i])
        c.add(f"{t} casimir2 = sum dim Z", c2 == alg.casimir2())
        c.add(f"{t} casimir4 = sum s Z", c4 == alg.casimir4())
        conj = True
        for _ in range(20):
            h = alg.random_element(rng)
            expanded = alg.zero()
            for i, lab in enumerate(d.labels):
                expanded = expanded + d.Z[i].scale(d.character(lab, h))
            conj &= expanded == alg.conj_average(h)
        c.add(f"{t} conj_average = sum chi Z on 20 random h", conj)
        closed = {lab.name: s for lab, s in closed_form_table(t)}
        c.add(f"{t} closed = generic Schur", {lab.name: s for lab, s in zip(d.labels, d.schur)} == closed)
        c.add(f"{t} Schur bar duality", schur_multiset_duality_check(d))
        c.add(f"{t} sum dim^2 = |W|", sum(x * x for x in d.dims) == system.order)
    return c.finish()


# -- 6 -------------------------------------------------------------------------

def _h3_checks(c):
    d = central_decomposition(build("H3"), products=False)
    neg = [(lab, s) for lab, s in zip(d.labels, d.schur) if not analyze(s).is_positive]
    c.add("H3 exactly two Schur elements with negative coefficients", len(neg) == 2)
    if len(neg) == 2:
        (la, p), (lb, r) = neg
        shifted = p.shift(5) == r or r.shift(5) == p
        c.add("H3 negative pair differs by q^5 and is 3-dimensional", shifted and la.dim == lb.dim == 3)
    three = [s for lab, s in zip(d.labels, d.schur) if lab.dim == 3]
    pos3 = [s for s in three if analyze(s).is_positive]
    c.add("H3 positive 3-dimensional pair differs by q^5",
          len(pos3) == 2 and (pos3[0].shift(5) == pos3[1] or pos3[1].shift(5) == pos3[0]))


def criterion_6():
    c = Checks(600)
    for t in ("A1", "A2", "A3", "A4", "B2", "B3", "D4"):
        rows = closed_form_table(t)
        ok = all(analyze(s).is_positive and analyze(s).is_bar_symmetric for _, s in rows)
        c.add(f"{t} Schur elements positive and symmetric", ok)
        if t.startswith("A"):
            c.add(f"{t} Schur elements log-concave", all(analyze(s).is_log_concave for _, s in rows))
    c.add("I2(5) has a Schur element with a negative coefficient",
          any(not analyze(s).is_positive for _, s in closed_form_table("I2(5)")))
    for t in ("G2", "I2(5)"):
        p = to_q_view(_trace(t, 0, 3))
        c.add(f"P_{{0,3,{t}}} has a negative coefficient", any(x < 0 for _, x in p.terms()),
              f"P = {p}")
    for m in range(5, 13):
        p = to_q_view(invariant(CiliatedSurface(0, 3), build(f"I2({m})"), "schur"))
        c.add(f"constant term of P_{{0,3,I2({m})}} negative", p.coeff(0) < 0, f"constant term {p.coeff(0)}")
    for t in ("A1", "A2", "A3"):
        d = central_decomposition(build(t))
        alg = d.algebra
        ok = True
        for lab in d.labels:
            for w in range(alg.order):
                ok &= all(x >= 0 for _, x in d.character(lab, alg.b(w)).terms())
        c.add(f"{t} KL characters nonnegative", ok)
    b2 = algebra("B2")
    s = CiliatedSurface(2, 1, ((b2.b("121"),),))
    p = invariant(s, b2.system, "trace")
    c.add("B2 genus 2, one puncture, boundary b_rsr has a negative coefficient",
          any(x < 0 for _, x in p.terms()), f"P = {p}")
    if os.environ.get("HECKE_ENABLE_H3") == "1":
        _h3_checks(c)
    return c.finish()


# -- 7 -------------------------------------------------------------------------

Q1_TYPES = ["A1", "A2", "B2", "G2", "I2(5)", "A3"]
Q1_SURFACES = [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (0, 5)]


def criterion_7():
    c = Checks(60)
    for t in Q1_TYPES:
        for g, k in Q1_SURFACES:
            if t == "A3" and (g, k) == (2, 1):
                continue
            _trace(t, g, k)
    for (t, g, k), p in sorted(COMPUTED.items()):
        system = build(t)
        s = CiliatedSurface(g, k)
        r = analyze_invariant(p, s, system)
        order = system.order
        want_comm = order ** (k - 1) * system.commutator_solution_count(g)
        dims = [lab.dim for lab, _ in closed_form_table(t)]
        want_char = Fraction(order) ** (2 * g - 2 + k) * sum(Fraction(d) ** (2 - 2 * g) for d in dims)
        c.add(f"{t} ({g},{k}) P(1) = |W|^(k-1) * commutator count", r.value_at_one == want_comm)
        c.add(f"{t} ({g},{k}) P(1) = |W|^(2g-2+k) sum dim^(2-2g)", r.value_at_one == want_char)
        c.add(f"{t} ({g},{k}) even v-support and bar symmetric", r.even_support and r.bar_symmetric)
    return c.finish()


# -- 8 -------------------------------------------------------------------------

def criterion_8():
    c = Checks(300)
    rng = random.Random(8)
    for t in ("A1", "A2"):
        system = build(t)
        for gk in ((0, 4), (1, 1)):
            tri = triangulation(CiliatedSurface(*gk))
            base = invariant_statesum(tri, system)
            flips = redraws = True
            for _ in range(100):
                moved = random_flips(tri, rng, rng.randint(1, 12))
                flips &= invariant_statesum(moved, system) == base
                redraws &= invariant_statesum(moved.redraw_orientations(rng), system) == base
            c.add(f"{t} {gk} 100 flip sequences", flips)
            c.add(f"{t} {gk} orientation redraws", redraws)
    return c.finish()


CRITERIA = {
    1: ("paper-corpus regression", criterion_1),
    2: ("closed-form families", criterion_2),
    3: ("pipeline agreement", criterion_3),
    4: ("structure-tensor properties", criterion_4),
    5: ("center suite", criterion_5),
    6: ("positivity program", criterion_6),
    7: ("q=1 checks", criterion_7),
    8: ("triangulation robustness", criterion_8),
}


def report(number):
    title, fn = CRITERIA[number]
    checks = fn()
    failed = [(name, detail) for name, ok, detail in checks.items if not ok]
    status = "PASS" if not failed else "FAIL"
    lines = [f"criterion {number} ({title}): {status} [{len(checks.items) - len(failed)}/{len(checks.items)} checks]"]
    for name, detail in failed:
        lines.append(f"    failed: {name}" + (f" ({detail})" if detail else ""))
    return not failed, "\n".join(lines)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, text = report(number)
    with capsys.disabled():
        print("\n" + text)
    assert ok, text


if __name__ == "__main__":
    results = [report(n) for n in sorted(CRITERIA)]
    for _, text in results:
        print(text)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
