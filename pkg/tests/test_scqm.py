import pytest

from gradedsusy.scalars import GaussianRational
from gradedsusy.scqm import (
    OSP12_RELATIONS,
    REFERENCE_FGH,
    build_model,
    cl6b_fgh,
    verify_osp12,
    verify_oscillator,
)


def test_osp12_relations():
    res = verify_osp12()
    assert res["status"] == "pass"
    assert res["relations_listed"] == len(OSP12_RELATIONS) == 10
    assert res["pairs_checked"] == 25
    assert res["gamma_condition"] == "pass"


def test_unknown_kind():
    with pytest.raises(ValueError):
        build_model("cl8")
    with pytest.raises(ValueError):
        build_model("cl6b", n=4)


def _by_name(res, name):
    return [c for c in res["checks"] if c["name"] == name]


@pytest.mark.parametrize("ladder", ["ladder4", "ladder6"])
def test_oscillator_identities(ladder, request):
    lad = request.getfixturevalue(ladder)
    res = verify_oscillator(lad)
    assert res["status"] == "pass"
    names = {c["name"] for c in res["checks"] if c["status"] == "pass"}
    for required in (
        "F^2 = 1",
        "[a, a^dagger] = 1 - 2 beta F",
        "{a, a^dagger} = 2 R",
        "{F, a} = 0",
        "{F, a^dagger} = 0",
        "R = a^dagger a + (1 - 2 beta F)/2",
        "[R, a] = -a",
        "a^dagger = adjoint(a)",
    ):
        assert required in names
    signs = _by_name(res, "[R, a^dagger] sign")
    assert signs and all(c["computed_sign"] == 1 and c["discrepancy"] for c in signs)
    coeffs = {c["coefficient"] for c in _by_name(res, "{a^dagger, a^dagger} = c L+")}
    assert coeffs == {"4"}


def test_ladder_shapes(ladder4, ladder6):
    assert len(ladder4.ann) == 4 and ladder4.model.dim == 8
    assert len(ladder6.ann) == 8 and ladder6.model.dim == 16


def test_fgh_tables(cl6b):
    got = cl6b_fgh(cl6b)
    want = {k: {i: GaussianRational(v) for i, v in t.items()} for k, t in REFERENCE_FGH.items()}
    assert got == want
    assert got["f"]["2013"] == -1
    assert got["g"]["0213"] == got["g"]["1302"] == -1
    assert got["h"]["0132"] == -1


def test_fgh_requires_cl6b(cl4):
    with pytest.raises(ValueError):
        cl6b_fgh(cl4)


def test_cl2n_tables_equal_cl4(cl4, cl2n):
    named = lambda m: {
        (m.basis[i].name, m.basis[j].name): {m.basis[k].name: c for k, c in t}
        for (i, j), t in m.bracket_table.entries.items()
    }
    assert named(cl4) == named(cl2n)
