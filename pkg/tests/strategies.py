"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from gradedsusy.scalars import BetaPoly, GaussianRational
from gradedsusy.weylops import DiffOp, MatrixOp

small_int = st.integers(-6, 6)
fractions = st.builds(Fraction, small_int, st.integers(1, 5))
gaussians = st.builds(GaussianRational, fractions, fractions)
betapolys = st.lists(gaussians, max_size=3).map(lambda cs: BetaPoly(tuple(cs)))

_term_key = st.tuples(st.integers(-2, 2), st.integers(0, 2))
diffops = st.dictionaries(_term_key, betapolys, max_size=3).map(DiffOp.from_terms)


def matrixops(dim: int = 2):
    cell = st.one_of(st.none(), diffops)
    rows = st.lists(st.lists(cell, min_size=dim, max_size=dim), min_size=dim, max_size=dim)
    return rows.map(MatrixOp.from_rows)
