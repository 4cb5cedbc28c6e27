"""One-variable differential operators with Laurent powers of x, and matrices of them.

A :class:`DiffOp` is a finite sum of ``c * beta^j * x^m * d^k`` kept in normal
order (every power of x to the left of every derivative).  Internally the
terms live in one flat dict keyed by ``(m, k, j)`` so that composition is a
single pass of integer-keyed dict updates.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Optional, Sequence, Union

from .clifford import ConstMatrix
from .linalg import EchelonBasis
from .scalars import ZERO, BetaPoly, GaussianRational

Key = tuple[int, int, int]  # (x power, d power, beta power)


@lru_cache(maxsize=None)
def _leibniz(k: int, m: int) -> tuple[tuple[int, int], ...]:
    """Nonzero (r, C(k,r) * m(m-1)...(m-r+1)) for d^k x^m = sum_r ... x^(m-r) d^(k-r)."""
    out = []
    falling = 1
    for r in range(k + 1):
        if r:
            falling *= m - r + 1
        if falling == 0:
            break
        out.append((r, comb(k, r) * falling))
    return tuple(out)


def _add_term(acc: dict, key: Key, c: GaussianRational) -> None:
    cur = acc.get(key)
    acc[key] = c if cur is None else cur + c


def _prune(acc: dict) -> dict:
    return {k: v for k, v in acc.items() if not v.is_zero()}


def _compose_into(acc: dict, a: Mapping, b: Mapping, scale: Optional[GaussianRational] = None) -> None:
    for (m1, k1, j1), c1 in a.items():
        if scale is not None:
            c1 = c1 * scale
        for (m2, k2, j2), c2 in b.items():
            c = c1 * c2
            if k1 == 0:
                _add_term(acc, (m1 + m2, k2, j1 + j2), c)
                continue
            for r, w in _leibniz(k1, m2):
                _add_term(acc, (m1 + m2 - r, k1 - r + k2, j1 + j2), c * w if w != 1 else c)


class DiffOp:
    """Normal-ordered Laurent-Weyl operator with BetaPoly coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Optional[Mapping[Key, GaussianRational]] = None) -> None:
        self._t: dict[Key, GaussianRational] = _prune(dict(terms or {}))
        self._hash: Optional[int] = None

    @classmethod
    def _wrap(cls, terms: dict) -> "DiffOp":
        obj = object.__new__(cls)
        obj._t = terms
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], object]) -> "DiffOp":
        """Build from a map ``(xpow, dpow) -> BetaPoly`` (or anything coercible)."""
        flat: dict = {}
        for (m, k), coeff in terms.items():
            if k < 0:
                raise ValueError("derivative order must be nonnegative")
            for j, c in enumerate(BetaPoly.coerce(coeff).coeffs):
                if c:
                    flat[(m, k, j)] = c
        return cls(flat)

    @classmethod
    def monomial(cls, coeff=1, xpow: int = 0, dpow: int = 0, betapow: int = 0) -> "DiffOp":
        return cls({(xpow, dpow, betapow): GaussianRational.coerce(coeff)})

    @classmethod
    def scalar(cls, coeff) -> "DiffOp":
        return cls.from_terms({(0, 0): coeff})

    @classmethod
    def x(cls, m: int = 1) -> "DiffOp":
        return cls.monomial(1, xpow=m)

    @classmethod
    def d(cls, k: int = 1) -> "DiffOp":
        return cls.monomial(1, dpow=k)

    @classmethod
    def beta(cls) -> "DiffOp":
        return cls.monomial(1, betapow=1)

    @property
    def flat_terms(self) -> dict[Key, GaussianRational]:
        return self._t

    @property
    def terms(self) -> dict[tuple[int, int], BetaPoly]:
        grouped: dict[tuple[int, int], dict[int, GaussianRational]] = {}
        for (m, k, j), c in self._t.items():
            grouped.setdefault((m, k), {})[j] = c
        return {
            mk: BetaPoly(js.get(j, ZERO) for j in range(max(js) + 1))
            for mk, js in sorted(grouped.items())
        }

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __add__(self, other: "DiffOp") -> "DiffOp":
        acc = dict(self._t)
        for key, c in other._t.items():
            _add_term(acc, key, c)
        return DiffOp._wrap(_prune(acc))

    def __neg__(self) -> "DiffOp":
        return DiffOp._wrap({k: -c for k, c in self._t.items()})

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        """Multiply by a constant or by a BetaPoly."""
        if isinstance(c, BetaPoly):
            acc: dict = {}
            for jb, cb in enumerate(c.coeffs):
                if cb:
                    for (m, k, j), v in self._t.items():
                        _add_term(acc, (m, k, j + jb), v * cb)
            return DiffOp._wrap(_prune(acc))
        c = GaussianRational.coerce(c)
        if c.is_zero():
            return DiffOp._wrap({})
        return DiffOp._wrap({k: v * c for k, v in self._t.items()})

    def __mul__(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            return compose(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "DiffOp":
        return self.scale(other)

    def adjoint(self) -> "DiffOp":
        """Formal adjoint: x is real, d^dagger = -d, beta real, order reversed."""
        acc: dict = {}
        for (m, k, j), c in self._t.items():
            c = c.conjugate()
            if k % 2:
                c = -c
            # d^k x^m, normal ordered
            for r, w in _leibniz(k, m):
                _add_term(acc, (m - r, k - r, j), c * w)
        return DiffOp._wrap(_prune(acc))

    def instantiate(self, beta) -> dict[tuple[int, int], GaussianRational]:
        """Substitute a rational beta; returns ``(xpow, dpow) -> coefficient``."""
        b = GaussianRational.coerce(beta)
        acc: dict = {}
        for (m, k, j), c in self._t.items():
            _add_term(acc, (m, k), c * b**j)
        return _prune(acc)

    def max_beta_degree(self) -> int:
        return max((j for (_, _, j) in self._t), default=0)

    def __repr__(self) -> str:
        return f"DiffOp({self})"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for (m, k), coeff in self.terms.items():
            parts.append(f"({coeff}) * x^{m} * d^{k}")
        return " + ".join(parts)

    def to_json(self) -> list[dict]:
        return [
            {"x": m, "d": k, "coeff": coeff.to_json()} for (m, k), coeff in self.terms.items()
        ]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "DiffOp":
        return cls.from_terms({(t["x"], t["d"]): BetaPoly.from_json(t["coeff"]) for t in data})


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Normal-ordered product a*b using d x^m = x^m d + m x^(m-1)."""
    acc: dict = {}
    _compose_into(acc, a._t, b._t)
    return DiffOp._wrap(_prune(acc))


class MatrixOp:
    """Square matrix of DiffOps, stored sparsely, with an optional grading degree."""

    __slots__ = ("dim", "entries", "degree")

    def __init__(
        self,
        dim: int,
        entries: Optional[Mapping[tuple[int, int], DiffOp]] = None,
        degree: Optional[tuple[int, ...]] = None,
    ) -> None:
        self.dim = dim
        self.entries: dict[tuple[int, int], DiffOp] = {
            ij: op for ij, op in (entries or {}).items() if op
        }
        for i, j in self.entries:
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"entry {(i, j)} outside a {dim}x{dim} matrix")
        self.degree = tuple(degree) if degree is not None else None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Optional[DiffOp]]], degree=None) -> "MatrixOp":
        return cls(
            len(rows),
            {(i, j): op for i, r in enumerate(rows) for j, op in enumerate(r) if op is not None},
            degree,
        )

    @classmethod
    def identity(cls, dim: int) -> "MatrixOp":
        return cls(dim, {(i, i): DiffOp.scalar(1) for i in range(dim)})

    @classmethod
    def constant(cls, c: ConstMatrix, degree=None) -> "MatrixOp":
        return cls(c.dim, {(i, j): DiffOp.scalar(v) for i, j, v in c.nonzero()}, degree)

    def with_degree(self, degree) -> "MatrixOp":
        return MatrixOp(self.dim, self.entries, degree)

    def __getitem__(self, ij: tuple[int, int]) -> DiffOp:
        return self.entries.get(ij, DiffOp())

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixOp):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.entries.items())))

    def _check(self, other: "MatrixOp") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "MatrixOp") -> "MatrixOp":
        self._check(other)
        out = dict(self.entries)
        for ij, op in other.entries.items():
            out[ij] = out[ij] + op if ij in out else op
        return MatrixOp(self.dim, out)

    def __neg__(self) -> "MatrixOp":
        return MatrixOp(self.dim, {ij: -op for ij, op in self.entries.items()}, self.degree)

    def __sub__(self, other: "MatrixOp") -> "MatrixOp":
        return self + (-other)

    def scale(self, c) -> "MatrixOp":
        return MatrixOp(self.dim, {ij: op.scale(c) for ij, op in self.entries.items()}, self.degree)

    def __rmul__(self, c) -> "MatrixOp":
        return self.scale(c)

    def __matmul__(self, other: "MatrixOp") -> "MatrixOp":
        return matmul(self, other)

    def adjoint(self) -> "MatrixOp":
        return MatrixOp(
            self.dim, {(j, i): op.adjoint() for (i, j), op in self.entries.items()}, self.degree
        )

    def flat(self) -> dict[tuple[int, int, int, int, int], GaussianRational]:
        """Sparse vector over (row, col, xpow, dpow, betapow)."""
        out = {}
        for (i, j), op in self.entries.items():
            for (m, k, b), c in op.flat_terms.items():
                out[(i, j, m, k, b)] = c
        return out

    @classmethod
    def from_flat(cls, dim: int, flat: Mapping) -> "MatrixOp":
        grouped: dict = {}
        for (i, j, m, k, b), c in flat.items():
            grouped.setdefault((i, j), {})[(m, k, b)] = c
        return cls(dim, {ij: DiffOp(t) for ij, t in grouped.items()})

    def max_beta_degree(self) -> int:
        return max((op.max_beta_degree() for op in self.entries.values()), default=0)

    def __repr__(self) -> str:
        return f"MatrixOp(dim={self.dim}, nnz={len(self.entries)}, degree={self.degree})"

    def __str__(self) -> str:
        lines = [f"MatrixOp {self.dim}x{self.dim} degree={self.degree}"]
        for (i, j), op in sorted(self.entries.items()):
            lines.append(f"  [{i},{j}] {op}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": list(self.degree) if self.degree is not None else None,
            "entries": [
                {"row": i, "col": j, "terms": op.to_json()}
                for (i, j), op in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MatrixOp":
        return cls(
            data["dim"],
            {(e["row"], e["col"]): DiffOp.from_json(e["terms"]) for e in data["entries"]},
            data.get("degree"),
        )


def _rows_of(m: MatrixOp) -> dict[int, list[tuple[int, DiffOp]]]:
    rows: dict[int, list[tuple[int, DiffOp]]] = {}
    for (i, j), op in m.entries.items():
        rows.setdefault(i, []).append((j, op))
    return rows


def _product_terms(a: MatrixOp, b: MatrixOp, acc: dict, scale: Optional[GaussianRational] = None) -> None:
    brows = _rows_of(b)
    for (i, l), op_a in a.entries.items():
        for j, op_b in brows.get(l, ()):
            cell = acc.get((i, j))
            if cell is None:
                cell = acc[(i, j)] = {}
            _compose_into(cell, op_a._t, op_b._t, scale)


def _finish(dim: int, acc: dict) -> MatrixOp:
    entries = {}
    for ij, cell in acc.items():
        cell = _prune(cell)
        if cell:
            entries[ij] = DiffOp._wrap(cell)
    out = MatrixOp.__new__(MatrixOp)
    out.dim, out.entries, out.degree = dim, entries, None
    return out


def matmul(a: MatrixOp, b: MatrixOp) -> MatrixOp:
    a._check(b)
    acc: dict = {}
    _product_terms(a, b, acc)
    return _finish(a.dim, acc)


_MINUS_ONE = GaussianRational(-1)


def bracket(a: MatrixOp, b: MatrixOp, sign: Union[str, int] = "commutator") -> MatrixOp:
    """ab - ba (commutator) or ab + ba (anticommutator), normal ordered."""
    if sign in ("commutator", -1):
        s = _MINUS_ONE
    elif sign in ("anticommutator", 1):
        s = None
    else:
        raise ValueError(f"unknown bracket sign {sign!r}")
    a._check(b)
    acc: dict = {}
    _product_terms(a, b, acc)
    _product_terms(b, a, acc, s)
    return _finish(a.dim, acc)


def adjoint(a: MatrixOp) -> MatrixOp:
    return a.adjoint()


def tensor(c: ConstMatrix, a: MatrixOp, degree=None) -> MatrixOp:
    """Kronecker product with the constant factor as the coarse index."""
    n, m = c.dim, a.dim
    entries = {}
    for i, j, v in c.nonzero():
        for (p, q), op in a.entries.items():
            entries[(i * m + p, j * m + q)] = op.scale(v)
    return MatrixOp(n * m, entries, degree)


class NotInSpan(ArithmeticError):
    """Raised when an operator is not a combination of the given basis."""

    def __init__(self, message: str, residual: Optional[MatrixOp] = None) -> None:
        super().__init__(message)
        self.residual = residual


class SpanDecomposer:
    """Reusable exact decomposition against a fixed list of MatrixOps.

    Coefficients are BetaPolys: when a constant combination does not exist,
    beta-multiples of the basis are admitted up to the target's beta degree.
    """

    def __init__(self, basis: Sequence[MatrixOp]) -> None:
        if not basis:
            raise ValueError("empty basis")
        self.basis = list(basis)
        self.dim = self.basis[0].dim
        self._flat = [b.flat() for b in self.basis]
        self._echelon = EchelonBasis()
        self.rank = sum(self._echelon.add(v, (idx, 0)) for idx, v in enumerate(self._flat))
        self._shift = 0

    @property
    def independent(self) -> bool:
        return self.rank == len(self.basis)

    def _extend(self, shift: int) -> None:
        while self._shift < shift:
            self._shift += 1
            s = self._shift
            for idx, v in enumerate(self._flat):
                moved = {(i, j, m, k, b + s): c for (i, j, m, k, b), c in v.items()}
                self._echelon.add(moved, (idx, s))

    def decompose(self, target: MatrixOp) -> list[BetaPoly]:
        if target.dim != self.dim:
            raise ValueError("dimension mismatch")
        flat = target.flat()
        residual, combo = self._echelon.reduce(flat)
        if residual and target.max_beta_degree() > self._shift:
            self._extend(target.max_beta_degree())
            residual, combo = self._echelon.reduce(flat)
        if residual:
            raise NotInSpan(
                f"target not in span of {len(self.basis)} basis operators "
                f"({len(residual)} residual terms)",
                MatrixOp.from_flat(self.dim, residual),
            )
        coeffs: list[dict[int, GaussianRational]] = [{} for _ in self.basis]
        for (idx, s), c in combo.items():
            coeffs[idx][s] = c
        return [BetaPoly(cs.get(s, ZERO) for s in range(max(cs) + 1)) if cs else BetaPoly() for cs in coeffs]


def decompose(a: MatrixOp, basis: Sequence[MatrixOp]) -> list[BetaPoly]:
    """Exact coefficients c with a == sum(c_i * basis_i); raises NotInSpan."""
    return SpanDecomposer(basis).decompose(a)


def combination(coeffs: Iterable[tuple[object, MatrixOp]], dim: int) -> MatrixOp:
    """sum(c * op) for (BetaPoly or scalar, MatrixOp) pairs, built in one pass."""
    acc: dict = {}
    for c, op in coeffs:
        c = BetaPoly.coerce(c)
        for jb, cb in enumerate(c.coeffs):
            if not cb:
                continue
            for ij, diff in op.entries.items():
                cell = acc.get(ij)
                if cell is None:
                    cell = acc[ij] = {}
                for (m, k, j), v in diff._t.items():
                    _add_term(cell, (m, k, j + jb), v * cb)
    return _finish(dim, acc)
