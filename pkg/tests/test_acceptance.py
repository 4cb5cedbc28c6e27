"""Acceptance criteria 1-10, one line of output per criterion.

Run with pytest, or directly: ``python tests/test_acceptance.py``.
Each criterion builds its own models so the time limits cover the full work.
"""

import sys
import time
from fractions import Fraction

import pytest

from gradedsusy.clifford import verify_clifford
from gradedsusy.graded import (
    assign_component_degrees,
    coupling_graph,
    verify_hermiticity,
    verify_jacobi,
    with_closure,
)
from gradedsusy.scalars import GaussianRational
from gradedsusy.scqm import REFERENCE_FGH, build_ladder, build_model, cl6b_fgh, verify_osp12, verify_oscillator
from gradedsusy.spectrum import (
    WaveVector,
    eigen_check,
    excited_levels,
    formal_ground_states,
    grade_components,
    proportionality_check,
)


def _labels(degs):
    return ["".join(map(str, d)) for d in degs]


def c1_clifford():
    for m, pairs in ((2, 10), (3, 21)):
        res = verify_clifford(m)
        assert res["status"] == "pass" and res["pairs_checked"] == pairs, res
    return "m=2: 10 pairs, m=3: 21 pairs, all Hermitian"


def c2_osp12():
    res = verify_osp12()
    assert res["status"] == "pass", [c for c in res["checks"] if c["status"] != "pass"]
    assert res["relations_listed"] == 10
    return f"10 relations, {res['pairs_checked']} ordered pairs"


def c3_g1():
    m = with_closure(build_model("cl4"))
    assert len(m.basis) == 20
    for mode in ("operator", "direct"):
        jac = verify_jacobi(m, mode=mode)
        assert jac["status"] == "pass" and jac["triples_checked"] == 1540, mode
    assert verify_hermiticity(m)["status"] == "pass"
    return "20 generators, closure ok, 1540 Jacobi triples (operator and direct), all Hermitian"


def c4_g2():
    m = with_closure(build_model("cl6b"))
    assert len(m.basis) == 40 and m.dim == 16
    for mode in ("operator", "direct"):
        jac = verify_jacobi(m, mode=mode)
        assert jac["status"] == "pass" and jac["triples_checked"] == 11480, mode
    fgh = cl6b_fgh(m)
    want = {k: {i: GaussianRational(v) for i, v in t.items()} for k, t in REFERENCE_FGH.items()}
    assert fgh == want, fgh
    assert fgh["f"]["2013"] == -1 and fgh["g"]["0213"] == fgh["g"]["1302"] == -1 and fgh["h"]["0132"] == -1
    return "40 generators, 11480 Jacobi triples (operator and direct), f/g/h tables exact"


def c5_reducibility():
    comps = coupling_graph(build_model("cl2n"))
    assert comps == [[0, 2, 4, 6, 9, 11, 13, 15], [1, 3, 5, 7, 8, 10, 12, 14]], comps
    assert len(coupling_graph(build_model("cl4"))) == 1
    assert len(coupling_graph(build_model("cl6b"))) == 1
    return "cl2n splits into the two invariant 8-dim blocks; cl4, cl6b connected"


def c6_table_equality():
    a, b = with_closure(build_model("cl4")), with_closure(build_model("cl2n"))

    def named(m):
        return {
            (m.basis[i].name, m.basis[j].name): {m.basis[k].name: c for k, c in t}
            for (i, j), t in m.bracket_table.entries.items()
        }

    assert named(a) == named(b)
    return "400 ordered brackets coefficient-identical"


def c7_oscillator():
    required = {
        "F^2 = 1",
        "[a, a^dagger] = 1 - 2 beta F",
        "{a, a^dagger} = 2 R",
        "{F, a} = 0",
        "{F, a^dagger} = 0",
        "R = a^dagger a + (1 - 2 beta F)/2",
        "[R, a] = -a",
    }
    for kind in ("cl4", "cl6b"):
        res = verify_oscillator(build_ladder(build_model(kind)))
        assert res["status"] == "pass", kind
        assert required <= {c["name"] for c in res["checks"] if c["status"] == "pass"}
        signs = [c for c in res["checks"] if c["name"] == "[R, a^dagger] sign"]
        assert signs and all(c["computed_sign"] == 1 and c["discrepancy"] for c in signs)
    return "identities exact in both models; [R, a^dagger] = +a^dagger (differs from printed sign)"


def c8_grading():
    g1 = _labels(assign_component_degrees(build_model("cl4"), (0, (0, 0, 0))))
    assert g1 == ["000", "001", "110", "111", "011", "010", "101", "100"], g1
    g2 = _labels(assign_component_degrees(build_model("cl6b"), (0, (0, 0, 0))))
    assert g2 == [
        "000", "111", "110", "001", "011", "100", "101", "010",
        "110", "001", "000", "111", "101", "010", "011", "100",
    ], g2
    return "8-slot and 16-slot orderings reproduced"


def c9_spectrum():
    beta = Fraction(2)
    out = []
    for kind, deg in (("cl4", 4), ("cl6b", 8)):
        m = build_model(kind)
        lad = build_ladder(m)
        rep = excited_levels(m, lad, beta, 4)
        energies = [lev.energy for lev in rep.levels]
        assert energies == [GaussianRational(Fraction(5, 2) + n) for n in range(5)], energies
        assert [lev.degeneracy for lev in rep.levels] == [deg] * 5
        rejected = formal_ground_states(lad, beta)["-"]
        assert {eigen_check(lad.R0, beta, v) for v in rejected} == {GaussianRational(Fraction(-3, 2))}
        out.append(f"{kind}: 5/2..13/2 x{deg}")
        if kind == "cl4":
            degs = grade_components(m)
            a = WaveVector.unit(m.dim, degs.index((0, 0, 1)), beta)
            b = WaveVector.unit(m.dim, degs.index((1, 1, 1)), beta)
            lam = proportionality_check(lad, beta, a, "100", b, "010", degs)
            assert not lam.is_zero()
            out.append(f"ratio {lam}")
    return ", ".join(out) + ", rejected branch -3/2"


def c10_general_n():
    m = with_closure(build_model("cl4", n=4))
    res = verify_jacobi(m)
    assert res["status"] == "pass"
    return f"n=4: {len(m.basis)} generators, closure ok, {res['triples_checked']} Jacobi triples"


CRITERIA = [
    (1, "Clifford relations", c1_clifford, 1),
    (2, "osp(1|2) table", c2_osp12, 1),
    (3, "G1 structure", c3_g1, 60),
    (4, "G2 structure", c4_g2, 600),
    (5, "reducibility witness", c5_reducibility, 5),
    (6, "bracket-table equality", c6_table_equality, 60),
    (7, "oscillator identities", c7_oscillator, 30),
    (8, "component grading", c8_grading, 1),
    (9, "spectrum", c9_spectrum, 60),
    (10, "general-n smoke test", c10_general_n, 900),
]


def run_criterion(num, name, fn, limit, stream):
    t0 = time.perf_counter()
    try:
        detail = fn()
        elapsed = time.perf_counter() - t0
        ok = elapsed < limit
        if not ok:
            detail = f"too slow ({elapsed:.2f}s >= {limit}s)"
    except AssertionError as exc:
        elapsed = time.perf_counter() - t0
        ok, detail = False, f"assertion failed: {exc}"
    stream.write(f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {name} ({elapsed:.2f}s < {limit}s): {detail}\n")
    stream.flush()
    return ok, detail


@pytest.mark.parametrize("num,name,fn,limit", CRITERIA, ids=[f"c{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, limit, capsys):
    with capsys.disabled():
        sys.stdout.write("\n")
        ok, detail = run_criterion(num, name, fn, limit, sys.stdout)
    assert ok, detail


if __name__ == "__main__":
    results = [run_criterion(*c, sys.stdout)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
