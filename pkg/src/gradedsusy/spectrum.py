"""Exact eigenfunctions of R = H + K on the ansatz x^q exp(-x^2/2).

Every component of a :class:`WaveVector` is a finite sum of ``c * x^q``
with rational q, and the Gaussian factor is implicit.  On that space
d(x^q e^{-x^2/2}) = (q x^(q-1) - x^(q+1)) e^{-x^2/2}, so all model operators
act exactly once beta is fixed to a rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .graded import Degree, GradedModel, InconsistentGrading, assign_component_degrees, bits_label, deg_add
from .linalg import EchelonBasis, nullspace, sparse_rank
from .scalars import GaussianRational, RationalLike
from .scqm import LadderSet
from .weylops import MatrixOp


class NoNormalizableSolution(ValueError):
    pass


class NotEigen(ArithmeticError):
    def __init__(self, residual: "WaveVector") -> None:
        super().__init__("vector is not an eigenvector")
        self.residual = residual


class NotProportional(ArithmeticError):
    def __init__(self, left: "WaveVector", right: "WaveVector") -> None:
        super().__init__("vectors are not proportional")
        self.left = left
        self.right = right


@dataclass(frozen=True)
class WaveVector:
    """Per component: exponent q -> coefficient of x^q e^{-x^2/2}."""

    ncomp: int
    comps: tuple[Mapping[Fraction, GaussianRational], ...]

    @classmethod
    def zero(cls, ncomp: int) -> "WaveVector":
        return cls(ncomp, tuple({} for _ in range(ncomp)))

    @classmethod
    def unit(cls, ncomp: int, comp: int, exponent: RationalLike, coeff=1) -> "WaveVector":
        comps = [{} for _ in range(ncomp)]
        comps[comp] = {Fraction(exponent): GaussianRational.coerce(coeff)}
        return cls(ncomp, tuple(comps))

    @classmethod
    def from_flat(cls, ncomp: int, flat: Mapping[tuple[int, Fraction], GaussianRational]) -> "WaveVector":
        comps: list[dict] = [{} for _ in range(ncomp)]
        for (c, q), v in flat.items():
            if v:
                comps[c][q] = v
        return cls(ncomp, tuple(comps))

    def flat(self) -> dict[tuple[int, Fraction], GaussianRational]:
        return {(c, q): v for c, comp in enumerate(self.comps) for q, v in comp.items()}

    def is_zero(self) -> bool:
        return not any(self.comps)

    def support(self) -> list[int]:
        return [c for c, comp in enumerate(self.comps) if comp]

    def exponents(self) -> set[Fraction]:
        return {q for comp in self.comps for q in comp}

    def __add__(self, other: "WaveVector") -> "WaveVector":
        flat = self.flat()
        for key, v in other.flat().items():
            flat[key] = flat[key] + v if key in flat else v
        return WaveVector.from_flat(self.ncomp, flat)

    def scale(self, c) -> "WaveVector":
        c = GaussianRational.coerce(c)
        return WaveVector.from_flat(self.ncomp, {k: v * c for k, v in self.flat().items()})

    def __sub__(self, other: "WaveVector") -> "WaveVector":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WaveVector):
            return NotImplemented
        return self.ncomp == other.ncomp and self.flat() == other.flat()

    def __hash__(self) -> int:
        return hash((self.ncomp, frozenset(self.flat().items())))

    def to_json(self) -> list[list[dict]]:
        return [
            [{"q": str(q), "coeff": v.to_json()} for q, v in sorted(comp.items())]
            for comp in self.comps
        ]

    def __str__(self) -> str:
        parts = []
        for c, comp in enumerate(self.comps):
            for q, v in sorted(comp.items()):
                parts.append(f"[{c}] ({v}) x^{q}")
        return " + ".join(parts) + " e^(-x^2/2)" if parts else "0"


@lru_cache(maxsize=None)
def _derivatives(q: Fraction, k: int) -> tuple[tuple[Fraction, int | Fraction], ...]:
    """d^k (x^q e^{-x^2/2}) as ((exponent, coefficient), ...) times e^{-x^2/2}."""
    poly: dict[Fraction, Fraction] = {q: Fraction(1)}
    for _ in range(k):
        nxt: dict[Fraction, Fraction] = {}
        for e, c in poly.items():
            if e != 0:
                nxt[e - 1] = nxt.get(e - 1, Fraction(0)) + c * e
            nxt[e + 1] = nxt.get(e + 1, Fraction(0)) - c
        poly = {e: c for e, c in nxt.items() if c}
    return tuple(sorted(poly.items()))


def apply(op: MatrixOp, beta: RationalLike, psi: WaveVector) -> WaveVector:
    """Exact action of a matrix operator with beta fixed to a rational."""
    if op.dim != psi.ncomp:
        raise ValueError(f"operator dimension {op.dim} does not match {psi.ncomp} components")
    beta = Fraction(beta)
    out: dict[tuple[int, Fraction], GaussianRational] = {}
    for (i, j), entry in op.entries.items():
        comp = psi.comps[j]
        if not comp:
            continue
        for (m, k), c in entry.instantiate(beta).items():
            for q, v in comp.items():
                cv = c * v
                for e, w in _derivatives(q, k):
                    key = (i, e + m)
                    term = cv * GaussianRational(w)
                    out[key] = out[key] + term if key in out else term
    return WaveVector.from_flat(psi.ncomp, out)


def is_normalizable(q: Fraction) -> bool:
    """x^q e^{-x^2/2} is square integrable on the half line iff 2q > -1."""
    return 2 * q > -1


def _annihilated(l: LadderSet, beta: Fraction, exponent: Fraction) -> list[WaveVector]:
    """Basis of {psi = x^exponent * v : a_label psi = 0 for every label}."""
    ncomp = l.model.dim
    labels = sorted(l.ann)
    candidates = [WaveVector.unit(ncomp, c, exponent) for c in range(ncomp)]
    columns = []
    for cand in candidates:
        col = {}
        for label in labels:
            for key, v in apply(l.ann[label], beta, cand).flat().items():
                col[(label, key)] = v
        columns.append(col)
    out = []
    for kernel in nullspace(columns):
        vec = WaveVector.zero(ncomp)
        for j, c in sorted(kernel.items()):
            vec = vec + candidates[j].scale(c)
        out.append(vec)
    return out


def formal_ground_states(l: LadderSet, beta: RationalLike) -> dict[str, list[WaveVector]]:
    """Solutions on both branches x^{+beta} and x^{-beta}, before any normalizability filter."""
    beta = Fraction(beta)
    return {"+": _annihilated(l, beta, beta), "-": _annihilated(l, beta, -beta)}


def ground_states(m: GradedModel, l: LadderSet, beta: RationalLike) -> list[WaveVector]:
    """Normalizable common kernel of all annihilators, for beta > 1."""
    beta = Fraction(beta)
    if beta <= 1:
        raise ValueError("ground-state analysis is restricted to beta > 1")
    if l.model is not m:
        raise ValueError("ladder set was built from a different model")
    states = []
    for branch, vecs in formal_ground_states(l, beta).items():
        q = beta if branch == "+" else -beta
        if is_normalizable(q):
            states.extend(vecs)
    if not states:
        raise NoNormalizableSolution(f"no normalizable ground state at beta={beta}")
    return states


def eigen_check(R: MatrixOp, beta: RationalLike, psi: WaveVector) -> GaussianRational:
    """Return lambda with R psi == lambda psi exactly; raise NotEigen otherwise."""
    if psi.is_zero():
        raise ValueError("zero vector")
    image = apply(R, beta, psi)
    flat = psi.flat()
    key = min(flat)
    lam = image.flat().get(key, GaussianRational(0)) / flat[key]
    residual = image - psi.scale(lam)
    if not residual.is_zero():
        raise NotEigen(residual)
    return lam


@dataclass
class Level:
    energy: GaussianRational
    degeneracy: int
    states: list[WaveVector] = field(repr=False)
    lplus_in_span: Optional[bool] = None

    def to_json(self) -> dict:
        out = {"energy": str(self.energy), "degeneracy": self.degeneracy}
        if self.lplus_in_span is not None:
            out["lplus_in_span"] = self.lplus_in_span
        return out


@dataclass
class SpectrumReport:
    beta: Fraction
    levels: list[Level]
    normalizable_branch: str = "+"
    model: str = ""

    def spacings(self) -> list[GaussianRational]:
        return [b.energy - a.energy for a, b in zip(self.levels, self.levels[1:])]

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "beta": str(self.beta),
            "branch": self.normalizable_branch,
            "levels": [lev.to_json() for lev in self.levels],
        }


def _independent(vectors: Sequence[WaveVector]) -> list[WaveVector]:
    basis = EchelonBasis()
    return [v for k, v in enumerate(vectors) if basis.add(v.flat(), k)]


def excited_levels(
    m: GradedModel,
    l: LadderSet,
    beta: RationalLike,
    nmax: int,
    order: Optional[Sequence[str]] = None,
) -> SpectrumReport:
    """Levels 0..nmax by repeated creation; level n spans all words of n creators on the ground space.

    Each level is rebuilt from a basis of the previous one, which spans the
    same space as the full set of words.  ``order`` permutes the creators.
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    beta = Fraction(beta)
    ground = ground_states(m, l, beta)
    labels = list(order) if order is not None else sorted(l.cre)
    if sorted(labels) != sorted(l.cre):
        raise ValueError("order must be a permutation of the creation labels")
    lp = l.Lplus[l.zero_label]
    levels: list[Level] = []
    bases: list[list[WaveVector]] = []
    current = ground
    for n in range(nmax + 1):
        if n > 0:
            current = [apply(l.cre[label], beta, v) for v in bases[-1] for label in labels]
        rank = sparse_rank([v.flat() for v in current])
        basis = _independent(current)
        if len(basis) != rank:
            raise ArithmeticError("fraction-free rank disagrees with echelon rank")
        energies = {eigen_check(l.R0, beta, v) for v in basis}
        if len(energies) != 1:
            raise ArithmeticError(f"level {n} mixes energies {sorted(map(str, energies))}")
        lplus_ok = None
        if n >= 2:
            span = EchelonBasis()
            for k, v in enumerate(basis):
                span.add(v.flat(), k)
            lplus_ok = all(not span.reduce(apply(lp, beta, v).flat())[0] for v in bases[n - 2])
        levels.append(Level(energies.pop(), rank, basis, lplus_ok))
        bases.append(basis)
    branch = "+" if all(q == beta for v in ground for q in v.exponents()) else "-"
    return SpectrumReport(beta, levels, branch, m.kind)


def grade_components(m: GradedModel) -> list[Degree]:
    """Degree of every Hilbert-space component, seeded with component 0 at degree zero."""
    degs = assign_component_degrees(m, (0, (0,) * m.n))
    if any(d is None for d in degs):
        raise InconsistentGrading("coupling graph is not connected; grading is not unique")
    return degs  # type: ignore[return-value]


def vector_degree(psi: WaveVector, degrees: Sequence[Degree]) -> Degree:
    """Degree of a homogeneous WaveVector; raises if the support mixes degrees."""
    found = {degrees[c] for c in psi.support()}
    if len(found) != 1:
        raise ValueError(f"vector is not homogeneous: {sorted(bits_label(d) for d in found)}")
    return found.pop()


def proportionality_check(
    l: LadderSet,
    beta: RationalLike,
    phi_a: WaveVector,
    c_label: str,
    phi_b: WaveVector,
    d_label: str,
    degrees: Sequence[Degree],
    creation: bool = True,
) -> GaussianRational:
    """lambda with op_c phi_a == lambda * op_d phi_b, where deg(phi_a)+c == deg(phi_b)+d.

    ``creation`` selects a^dagger (default) or a.  Raises NotProportional when
    no such lambda exists or both sides vanish.
    """
    ops = l.cre if creation else l.ann
    da = vector_degree(phi_a, degrees)
    db = vector_degree(phi_b, degrees)
    if deg_add(da, l.degrees[c_label]) != deg_add(db, l.degrees[d_label]):
        raise ValueError("degree condition a + c == b + d fails")
    left = apply(ops[c_label], beta, phi_a)
    right = apply(ops[d_label], beta, phi_b)
    if left.is_zero() or right.is_zero():
        raise NotProportional(left, right)
    rf, lf = right.flat(), left.flat()
    key = min(rf)
    lam = lf.get(key, GaussianRational(0)) / rf[key]
    if lam.is_zero() or left != right.scale(lam):
        raise NotProportional(left, right)
    return lam
