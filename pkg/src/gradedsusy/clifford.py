"""Hermitian irreducible representations of the even Clifford algebras Cl(2m)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import combinations_with_replacement
from typing import Sequence

from .scalars import ONE, ZERO, GaussianRational


@dataclass(frozen=True)
class ConstMatrix:
    """Dense square matrix with exact Q(i) entries."""

    dim: int
    entries: tuple[tuple[GaussianRational, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.dim or any(len(r) != self.dim for r in self.entries):
            raise ValueError("ConstMatrix must be square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ConstMatrix":
        return cls(len(rows), tuple(tuple(GaussianRational.coerce(c) for c in r) for r in rows))

    @classmethod
    def identity(cls, dim: int) -> "ConstMatrix":
        return cls(dim, tuple(tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim)))

    def __getitem__(self, ij: tuple[int, int]) -> GaussianRational:
        return self.entries[ij[0]][ij[1]]

    def __matmul__(self, other: "ConstMatrix") -> "ConstMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        n = self.dim
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ZERO
                for k in range(n):
                    a = self.entries[i][k]
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return ConstMatrix(n, tuple(rows))

    def __add__(self, other: "ConstMatrix") -> "ConstMatrix":
        return ConstMatrix(
            self.dim,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: "ConstMatrix") -> "ConstMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "ConstMatrix":
        c = GaussianRational.coerce(c)
        return ConstMatrix(self.dim, tuple(tuple(a * c for a in r) for r in self.entries))

    def adjoint(self) -> "ConstMatrix":
        n = self.dim
        return ConstMatrix(
            n, tuple(tuple(self.entries[j][i].conjugate() for j in range(n)) for i in range(n))
        )

    def kron(self, other: "ConstMatrix") -> "ConstMatrix":
        """Kronecker product; ``self`` carries the coarse (block) index."""
        n, m = self.dim, other.dim
        return ConstMatrix(
            n * m,
            tuple(
                tuple(self.entries[i // m][j // m] * other.entries[i % m][j % m] for j in range(n * m))
                for i in range(n * m)
            ),
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for r in self.entries for c in r)

    def nonzero(self) -> list[tuple[int, int, GaussianRational]]:
        return [(i, j, c) for i, r in enumerate(self.entries) for j, c in enumerate(r) if c]

    def to_json(self) -> list[list[dict]]:
        return [[c.to_json() for c in r] for r in self.entries]

    @classmethod
    def from_json(cls, data) -> "ConstMatrix":
        return cls.from_rows([[GaussianRational.from_json(c) for c in r] for r in data])

    def __str__(self) -> str:
        cells = [[str(c) for c in r] for r in self.entries]
        width = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)


_I = GaussianRational(0, 1)

_PAULI = {
    1: ((0, 1), (1, 0)),
    2: ((0, -_I), (_I, 0)),
    3: ((1, 0), (0, -1)),
}


def pauli(k: int) -> ConstMatrix:
    if k not in _PAULI:
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {k}")
    return ConstMatrix.from_rows(_PAULI[k])


def kron_all(factors: Sequence[ConstMatrix]) -> ConstMatrix:
    if not factors:
        return ConstMatrix.identity(1)
    return reduce(ConstMatrix.kron, factors)


@lru_cache(maxsize=None)
def build_gamma(m: int, j: int) -> ConstMatrix:
    """The j-th generator of the 2**m dimensional Hermitian irrep of Cl(2m).

    gamma_1 = s1^(x)m; gamma_j = s1^(x)(m-j+1) (x) s3 (x) I^(x)(j-2) for
    2 <= j <= m; gamma_(j+m) = s1^(x)(m-j) (x) s2 (x) I^(x)(j-1).
    """
    if m < 1:
        raise ValueError("m must be positive")
    if not 1 <= j <= 2 * m:
        raise ValueError(f"gamma index {j} out of range 1..{2 * m}")
    s1, s2, s3, i2 = pauli(1), pauli(2), pauli(3), ConstMatrix.identity(2)
    if j == 1:
        factors = [s1] * m
    elif j <= m:
        factors = [s1] * (m - j + 1) + [s3] + [i2] * (j - 2)
    else:
        k = j - m
        factors = [s1] * (m - k) + [s2] + [i2] * (k - 1)
    return kron_all(factors)


def gamma_product(m: int, indices: Sequence[int]) -> ConstMatrix:
    """Left-to-right product of gamma matrices; the empty product is the identity."""
    out = ConstMatrix.identity(2**m)
    for j in indices:
        out = out @ build_gamma(m, j)
    return out


def verify_clifford(m: int) -> dict:
    """Check {g_j, g_k} = 2 delta_jk and g_j^dagger = g_j over all unordered pairs."""
    dim = 2**m
    ident = ConstMatrix.identity(dim)
    zero = ident.scale(0)
    gammas = {j: build_gamma(m, j) for j in range(1, 2 * m + 1)}
    violations = []
    pairs = 0
    for j, k in combinations_with_replacement(range(1, 2 * m + 1), 2):
        pairs += 1
        anti = gammas[j] @ gammas[k] + gammas[k] @ gammas[j]
        expected = ident.scale(2) if j == k else zero
        if anti != expected:
            violations.append({"kind": "anticommutator", "j": j, "k": k})
    for j, g in gammas.items():
        if g.adjoint() != g:
            violations.append({"kind": "hermiticity", "j": j})
    return {
        "m": m,
        "dim": dim,
        "pairs_checked": pairs,
        "hermitian_checked": len(gammas),
        "violations": violations,
        "status": "pass" if not violations else "fail",
    }
