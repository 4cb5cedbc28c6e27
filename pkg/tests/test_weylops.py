from fractions import Fraction

import pytest
from hypothesis import given

from gradedsusy.clifford import ConstMatrix, build_gamma, pauli
from gradedsusy.scalars import BetaPoly, GaussianRational
from gradedsusy.scqm import build_osp12
from gradedsusy.weylops import (
    DiffOp,
    MatrixOp,
    NotInSpan,
    SpanDecomposer,
    adjoint,
    bracket,
    compose,
    decompose,
    tensor,
)
from strategies import diffops, matrixops

I = GaussianRational(0, 1)
d, x = DiffOp.d(), DiffOp.x()
p = d.scale(-I)


def test_leibniz_examples():
    assert compose(d, x) == x * d + DiffOp.scalar(1)
    assert compose(d, DiffOp.x(-1)) == DiffOp.x(-1) * d - DiffOp.x(-2)
    assert p * p == DiffOp.d(2).scale(-1)


def test_higher_leibniz():
    # d^2 x^2 = x^2 d^2 + 4 x d + 2
    expected = DiffOp.from_terms({(2, 2): 1, (1, 1): 4, (0, 0): 2})
    assert DiffOp.d(2) * DiffOp.x(2) == expected


def test_adjoint_examples():
    assert p.adjoint() == p
    assert (x * d).adjoint() == (x * d).scale(-1) - DiffOp.scalar(1)
    r = build_osp12()
    assert adjoint(r.odd_gens["Q"]) == r.odd_gens["Q"]


def test_bracket_examples():
    r = build_osp12()
    h, dil = r.even_gens["H"], r.even_gens["D"]
    q = r.odd_gens["Q"]
    assert bracket(dil, h) == h.scale(-I)
    # Q is stored times sqrt(2): {Q, Q}_stored = 2 * (2H)
    assert bracket(q, q, "anticommutator") == h.scale(4)
    assert bracket(h, h).is_zero()


def test_tensor_examples():
    h = build_osp12().even_gens["H"]
    big = tensor(ConstMatrix.identity(4), h)
    assert big.dim == 8
    for b in range(4):
        for (i, j), e in h.entries.items():
            assert big.entries[(2 * b + i, 2 * b + j)] == e
    s = tensor(pauli(3), MatrixOp.identity(2))
    diag = [s.entries[(k, k)] for k in range(4)]
    assert diag == [DiffOp.scalar(1)] * 2 + [DiffOp.scalar(-1)] * 2


def test_decompose_examples():
    r = build_osp12()
    h, dil, k = r.even_gens["H"], r.even_gens["D"], r.even_gens["K"]
    assert decompose(h.scale(2), [h, dil, k]) == [BetaPoly.const(2), BetaPoly(), BetaPoly()]
    g12 = build_gamma(2, 1) @ build_gamma(2, 2)
    with pytest.raises(NotInSpan):
        decompose(tensor(g12, h), [tensor(build_gamma(2, 3), h)])


def test_decompose_beta_dependent_coefficient():
    # beta * K is in the span of K with a polynomial coefficient
    k = build_osp12().even_gens["K"]
    target = k.scale(BetaPoly.beta() * 3)
    assert decompose(target, [k]) == [BetaPoly.beta() * 3]


def test_span_decomposer_detects_dependence():
    h = build_osp12().even_gens["H"]
    assert not SpanDecomposer([h, h.scale(2)]).independent


def test_serialization_roundtrip():
    r = build_osp12()
    for op in list(r.even_gens.values()) + list(r.odd_gens.values()):
        assert MatrixOp.from_json(op.to_json()) == op
        for entry in op.entries.values():
            assert DiffOp.from_json(entry.to_json()) == entry


def test_instantiate():
    op = DiffOp.x(-2).scale(BetaPoly.beta() * BetaPoly.beta())
    assert op.instantiate(Fraction(3, 2)) == {(-2, 0): GaussianRational(Fraction(9, 4))}


@given(diffops, diffops, diffops)
def test_composition_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(diffops, diffops, diffops)
def test_composition_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(diffops, diffops)
def test_adjoint_antimultiplicative(a, b):
    assert (a * b).adjoint() == b.adjoint() * a.adjoint()
    assert a.adjoint().adjoint() == a


@given(matrixops(), matrixops())
def test_bracket_symmetry(a, b):
    assert bracket(a, b) == -bracket(b, a)
    assert bracket(a, b, "anticommutator") == bracket(b, a, "anticommutator")


@given(matrixops(), matrixops())
def test_matrix_adjoint_antimultiplicative(a, b):
    assert adjoint(a @ b) == adjoint(b) @ adjoint(a)


@given(diffops)
def test_canonical_form_hash(a):
    b = a + DiffOp.x(3) - DiffOp.x(3)
    assert a == b and hash(a) == hash(b)
