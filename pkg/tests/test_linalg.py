from hypothesis import given
from hypothesis import strategies as st

from gradedsusy.linalg import EchelonBasis, nullspace, rank, sparse_rank
from gradedsusy.scalars import GaussianRational
from strategies import gaussians

G = GaussianRational
matrices = st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(gaussians, min_size=c, max_size=c), min_size=1, max_size=5)
)


def test_rank_examples():
    assert rank([[G(1), G(2)], [G(2), G(4)]]) == 1
    assert rank([[G(1), G(0, 1)], [G(0, 1), G(-1)]]) == 1
    assert rank([[G(1), G(0)], [G(0), G(1)]]) == 2
    assert rank([]) == 0


def _echelon_rank(rows):
    basis = EchelonBasis()
    return sum(basis.add({j: c for j, c in enumerate(r) if c}, k) for k, r in enumerate(rows))


@given(matrices)
def test_bareiss_agrees_with_fraction_elimination(rows):
    assert rank(rows) == _echelon_rank(rows)


@given(matrices)
def test_rank_of_transpose(rows):
    cols = [list(c) for c in zip(*rows)]
    assert rank(rows) == rank(cols)


@given(matrices)
def test_sparse_rank_matches_dense(rows):
    vecs = [{j: c for j, c in enumerate(r) if c} for r in rows]
    assert sparse_rank(vecs) == rank(rows)


@given(matrices)
def test_nullspace_vectors_annihilate(rows):
    columns = [{i: c for i, c in enumerate(r) if c} for r in rows]
    kernel = nullspace(columns)
    assert len(kernel) == len(columns) - sparse_rank(columns)
    for vec in kernel:
        acc = {}
        for j, c in vec.items():
            for i, v in columns[j].items():
                acc[i] = acc.get(i, G(0)) + c * v
        assert all(not v for v in acc.values())


@given(matrices)
def test_reduce_reconstructs(rows):
    basis = EchelonBasis()
    vecs = [{j: c for j, c in enumerate(r) if c} for r in rows]
    for k, v in enumerate(vecs[:-1]):
        basis.add(v, k)
    target = vecs[-1]
    residual, combo = basis.reduce(target)
    acc = dict(residual)
    for t, c in combo.items():
        for j, v in vecs[t].items():
            acc[j] = acc.get(j, G(0)) + c * v
    assert {j: v for j, v in acc.items() if v} == target
