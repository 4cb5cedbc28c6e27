"""Exact linear algebra over Q(i) on sparse vectors.

Vectors are dicts mapping a sortable key to a nonzero GaussianRational.
"""

from __future__ import annotations

from math import gcd
from typing import Hashable, Iterable, Mapping, Sequence

from .scalars import GaussianRational

SparseVec = dict


def axpy(target: dict, coeff: GaussianRational, vec: Mapping) -> None:
    """target += coeff * vec, in place, dropping cancelled entries."""
    for key, val in vec.items():
        cur = target.get(key)
        new = val * coeff if cur is None else cur + val * coeff
        if new.is_zero():
            target.pop(key, None)
        else:
            target[key] = new


class EchelonBasis:
    """Incremental row echelon form that remembers how each row was built.

    ``reduce(v)`` returns ``(residual, combo)`` with
    ``v == sum(combo[t] * original[t]) + residual``; the residual is empty
    exactly when ``v`` lies in the span of the vectors added so far.
    """

    def __init__(self) -> None:
        self._rows: list[tuple[Hashable, dict, dict]] = []  # pivot, row, combo

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Mapping) -> tuple[dict, dict]:
        residual = dict(vec)
        combo: dict = {}
        for pivot, row, row_combo in self._rows:
            c = residual.get(pivot)
            if c is None:
                continue
            factor = c / row[pivot]
            axpy(residual, -factor, row)
            axpy(combo, factor, row_combo)
        return residual, combo

    def add(self, vec: Mapping, tag: Hashable) -> bool:
        """Insert ``vec`` labelled ``tag``; return False if it was dependent."""
        residual, combo = self.reduce(vec)
        if not residual:
            return False
        # row = vec - sum(combo * originals) so its combo is tag - combo
        row_combo = {t: -c for t, c in combo.items()}
        row_combo[tag] = row_combo.get(tag, GaussianRational(0)) + GaussianRational(1)
        if row_combo[tag].is_zero():
            del row_combo[tag]
        pivot = min(residual)
        self._rows.append((pivot, residual, row_combo))
        return True


def nullspace(columns: Sequence[Mapping]) -> list[dict[int, GaussianRational]]:
    """Basis of ``{c : sum_j c_j * columns[j] == 0}`` as sparse dicts over j."""
    basis = EchelonBasis()
    kernel = []
    for j, col in enumerate(columns):
        residual, combo = basis.reduce(col)
        if residual:
            basis.add(col, j)
        else:
            vec = {t: -c for t, c in combo.items()}
            vec[j] = GaussianRational(1)
            kernel.append(vec)
    return kernel


def _gi_mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    return x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]


def _gi_exact_div(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    norm = y[0] * y[0] + y[1] * y[1]
    re = x[0] * y[0] + x[1] * y[1]
    im = x[1] * y[0] - x[0] * y[1]
    if re % norm or im % norm:
        raise ArithmeticError("Bareiss division was not exact")
    return re // norm, im // norm


def _to_gaussian_integer_row(row: Iterable[GaussianRational]) -> list[tuple[int, int]]:
    row = list(row)
    lcm = 1
    for c in row:
        lcm = lcm * c.d // gcd(lcm, c.d)
    return [(c.a * (lcm // c.d), c.b * (lcm // c.d)) for c in row]


def rank(rows: Sequence[Sequence[GaussianRational]]) -> int:
    """Rank over Q(i) by fraction-free (Bareiss) elimination in Z[i].

    Each row is first scaled to Gaussian integers; Bareiss' division step is
    exact in any integral domain, so all intermediates stay in Z[i].
    """
    if not rows:
        return 0
    m = [_to_gaussian_integer_row(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    prev = (1, 0)
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((k for k in range(r, nrows) if m[k][col] != (0, 0)), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for k in range(r + 1, nrows):
            mk = m[k]
            f = mk[col]
            for c in range(col + 1, ncols):
                a = _gi_mul(p, mk[c])
                b = _gi_mul(f, m[r][c])
                mk[c] = _gi_exact_div((a[0] - b[0], a[1] - b[1]), prev)
            mk[col] = (0, 0)
        prev = p
        r += 1
    return r


def sparse_rank(vectors: Sequence[Mapping]) -> int:
    """Rank of a family of sparse vectors, assembled on their shared key set."""
    keys = sorted({k for v in vectors for k in v})
    zero = GaussianRational(0)
    return rank([[v.get(k, zero) for k in keys] for v in vectors])
