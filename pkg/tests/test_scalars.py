from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradedsusy.scalars import (
    I,
    ONE,
    ZERO,
    BetaPoly,
    GaussianRational,
    conjugate,
    eval_beta,
    i_power,
    parse_rational,
    scalar_arith,
)
from strategies import betapolys, fractions, gaussians


def test_inverse_of_one_plus_i():
    z = GaussianRational(1, 1).inverse()
    assert z == GaussianRational(Fraction(1, 2), Fraction(-1, 2))


def test_beta_arithmetic_examples():
    b = BetaPoly.beta()
    assert (b + 1) * (b - 1) == b * b - 1
    assert (b * I).conjugate() == b * (-I)
    assert (BetaPoly.const(GaussianRational(0, Fraction(1, 2))) * b * b).eval(2) == GaussianRational(0, 2)


def test_i_powers():
    assert [i_power(k) for k in range(4)] == [ONE, I, GaussianRational(-1), -I]
    assert i_power(-1) == -I


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational.coerce(0.5)


@pytest.mark.parametrize("text,value", [("2", Fraction(2)), ("3/2", Fraction(3, 2)), ("-7/14", Fraction(-1, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "x", ""])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_scalar_arith_dispatch():
    assert scalar_arith(2, BetaPoly.beta(), "mul") == BetaPoly.beta() * 2
    assert scalar_arith(BetaPoly.beta(), None, "neg") == -BetaPoly.beta()
    with pytest.raises(ValueError):
        scalar_arith(1, 2, "^")


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO
    if a:
        assert a * a.inverse() == ONE


@given(gaussians, gaussians)
def test_conjugation_is_ring_automorphism(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert a.conjugate().conjugate() == a


@given(betapolys, betapolys, betapolys)
def test_betapoly_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert (p - p).is_zero()


@given(betapolys, betapolys, fractions)
def test_evaluation_is_homomorphism(p, q, v):
    assert eval_beta(p * q, v) == eval_beta(p, v) * eval_beta(q, v)
    assert eval_beta(p + q, v) == eval_beta(p, v) + eval_beta(q, v)
    assert eval_beta(conjugate(p), v) == eval_beta(p, v).conjugate()


@given(betapolys)
def test_betapoly_canonical_and_hashable(p):
    q = BetaPoly(p.coeffs + (ZERO, ZERO))
    assert p == q and hash(p) == hash(q)
    assert BetaPoly.from_json(p.to_json()) == p


@given(gaussians)
def test_gaussian_json_roundtrip(z):
    assert GaussianRational.from_json(z.to_json()) == z


@given(st.integers(-20, 20), st.integers(1, 20))
def test_reduced_storage_is_canonical(p, q):
    z = GaussianRational(Fraction(p, q), Fraction(2 * p, q))
    w = GaussianRational(Fraction(3 * p, 3 * q), Fraction(4 * p, 2 * q))
    assert z == w and hash(z) == hash(w)
