"""Z2^n degree bookkeeping, Clifford-tensor builders and the verification engine.

Degrees are plain tuples of 0/1 ints.  A model is a list of homogeneous
:class:`Generator` s; :func:`verify_closure` computes every ordered bracket
with the sign chosen from the degrees and decomposes it in the target degree
slice, and :func:`verify_jacobi` sweeps unordered triples.
"""

from __future__ import annotations

import itertools
import logging
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .clifford import ConstMatrix, build_gamma
from .linalg import EchelonBasis
from .scalars import ONE, BetaPoly, GaussianRational, i_power
from .weylops import MatrixOp, NotInSpan, SpanDecomposer, bracket, combination, matmul, tensor

log = logging.getLogger(__name__)

Degree = tuple[int, ...]


def deg_add(a: Degree, b: Degree) -> Degree:
    return tuple((x + y) & 1 for x, y in zip(a, b))


def deg_dot(a: Degree, b: Degree) -> int:
    return sum(x * y for x, y in zip(a, b)) & 1


def parity(a: Degree) -> int:
    return sum(a) & 1


def all_degrees(n: int) -> list[Degree]:
    """Z2^n in lexicographic order of the bit tuples."""
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=n)]


def bits_label(a: Degree) -> str:
    return "".join(str(x) for x in a)


def bracket_sign(a: Degree, b: Degree) -> str:
    return "anticommutator" if deg_dot(a, b) else "commutator"


def graded_bracket(x: MatrixOp, a: Degree, y: MatrixOp, b: Degree) -> MatrixOp:
    """[[x, y]] = xy - (-1)^(a.b) yx for homogeneous x, y."""
    return bracket(x, y, bracket_sign(a, b))


class ClosureViolation(ArithmeticError):
    def __init__(self, pair: tuple[str, str], residual: Optional[MatrixOp]) -> None:
        super().__init__(f"bracket of {pair[0]} and {pair[1]} leaves its degree slice")
        self.pair = pair
        self.residual = residual


class InconsistentGrading(ValueError):
    pass


class GammaMissing(ValueError):
    pass


class GammaConditionFailed(ValueError):
    pass


@dataclass
class SuperRealization:
    """Matrix realization of an ordinary Lie superalgebra.

    ``scale`` records, per generator, how many factors of sqrt(2) the stored
    operator carries relative to its conventional normalization.
    """

    name: str
    even_gens: dict[str, MatrixOp]
    odd_gens: dict[str, MatrixOp]
    gamma: Optional[ConstMatrix] = None
    scale: dict[str, int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return next(iter(self.even_gens.values())).dim

    def generators(self) -> list[tuple[str, int, MatrixOp]]:
        return [(k, 0, v) for k, v in self.even_gens.items()] + [
            (k, 1, v) for k, v in self.odd_gens.items()
        ]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "even": {k: v.to_json() for k, v in self.even_gens.items()},
            "odd": {k: v.to_json() for k, v in self.odd_gens.items()},
            "gamma": self.gamma.to_json() if self.gamma is not None else None,
            "scale": dict(self.scale),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SuperRealization":
        return cls(
            data["name"],
            {k: MatrixOp.from_json(v) for k, v in data["even"].items()},
            {k: MatrixOp.from_json(v) for k, v in data["odd"].items()},
            ConstMatrix.from_json(data["gamma"]) if data.get("gamma") is not None else None,
            dict(data.get("scale", {})),
        )


@dataclass(frozen=True)
class Generator:
    name: str
    family: str
    label: str
    degree: Degree
    op: MatrixOp
    scale: int = 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "label": self.label,
            "degree": list(self.degree),
            "scale": self.scale,
            "op": self.op.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Generator":
        degree = tuple(data["degree"])
        return cls(
            data["name"],
            data["family"],
            data["label"],
            degree,
            MatrixOp.from_json(data["op"]).with_degree(degree),
            data.get("scale", 0),
        )


@dataclass
class BracketTable:
    """Structure constants: (i, j) -> [(k, coeff)] with basis-index keys."""

    entries: dict[tuple[int, int], list[tuple[int, BetaPoly]]]
    brackets: dict[tuple[int, int], MatrixOp] = field(default_factory=dict, repr=False)

    def coeffs(self, i: int, j: int) -> dict[int, BetaPoly]:
        return dict(self.entries.get((i, j), ()))


@dataclass
class GradedModel:
    n: int
    basis: list[Generator]
    kind: str
    params: dict = field(default_factory=dict)
    realization: Optional[SuperRealization] = None
    bracket_table: Optional[BracketTable] = None

    @property
    def dim(self) -> int:
        return self.basis[0].op.dim

    def __len__(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        for k, g in enumerate(self.basis):
            if g.name == name:
                return k
        raise KeyError(name)

    def __getitem__(self, name: str) -> Generator:
        return self.basis[self.index(name)]

    def slices(self) -> dict[Degree, list[int]]:
        out: dict[Degree, list[int]] = {}
        for k, g in enumerate(self.basis):
            out.setdefault(g.degree, []).append(k)
        return out

    def to_json(self) -> dict:
        return {
            "format": "gradedsusy.model/1",
            "kind": self.kind,
            "n": self.n,
            "params": self.params,
            "dim": self.dim,
            "basis": [g.to_json() for g in self.basis],
            "realization": self.realization.to_json() if self.realization else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedModel":
        return cls(
            data["n"],
            [Generator.from_json(g) for g in data["basis"]],
            data["kind"],
            data.get("params", {}),
            SuperRealization.from_json(data["realization"]) if data.get("realization") else None,
        )


# ---------------------------------------------------------------- builders


def f_exponent(a: Degree, n: Optional[int] = None, phase: str = "product") -> int:
    """Phase exponent of the Cl(2(n-1)) lift.

    ``product``:  sum_{k=1}^{n-2} a_k prod_{l=k+1}^{n-1} a_l + |a| sum_{l=1}^{n-1} a_l  (mod 2).
    ``pairwise``: sum_{k<l<=n-1} a_k a_l + |a| sum_{l=1}^{n-1} a_l  (mod 2).
    Both reduce to a1 a2 + |a| (a1 + a2) at n = 3.  Only the pairwise form
    makes every generator Hermitian for n >= 4.
    """
    n = len(a) if n is None else n
    if len(a) != n:
        raise ValueError("degree length does not match n")
    if phase not in ("product", "pairwise"):
        raise ValueError(f"unknown phase form {phase!r}")
    total = 0
    if phase == "product":
        for k in range(n - 2):
            prod = a[k]
            for l in range(k + 1, n - 1):
                prod *= a[l]
            total += prod
    else:
        w = sum(a[: n - 1])
        total += w * (w - 1) // 2
    total += parity(a) * sum(a[: n - 1])
    return total & 1


def verify_gamma_condition(r: SuperRealization) -> dict:
    """[X0, G] = 0, {X1, G} = 0 and G^2 = 1 for the grading involution G."""
    if r.gamma is None:
        raise GammaMissing(f"realization {r.name} has no grading matrix")
    g = MatrixOp.constant(r.gamma)
    violations = []
    if g @ g != MatrixOp.identity(r.gamma.dim):
        violations.append({"check": "square", "generator": None})
    for name, par, op in r.generators():
        res = bracket(op, g, "anticommutator" if par else "commutator")
        if not res.is_zero():
            violations.append({"check": "anticommutes" if par else "commutes", "generator": name})
    checks = 1 + len(r.even_gens) + len(r.odd_gens)
    return {
        "realization": r.name,
        "checks": checks,
        "violations": violations,
        "status": "pass" if not violations else "fail",
    }


def _families(r: SuperRealization, par: int) -> dict[str, MatrixOp]:
    return r.odd_gens if par else r.even_gens


def build_cl2nm2(r: SuperRealization, n: int = 3, phase: str = "product") -> GradedModel:
    """Lift through Cl(2(n-1)): X_a = i^f(a) prod_j g_j^(a_j) (x) X_|a| G^(a_1+...+a_(n-1))."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if r.gamma is None:
        raise GammaMissing("the Cl(2(n-1)) lift needs a grading matrix")
    report = verify_gamma_condition(r)
    if report["status"] != "pass":
        raise GammaConditionFailed(str(report["violations"]))
    m = n - 1
    gmat = MatrixOp.constant(r.gamma)
    basis = []
    for a in all_degrees(n):
        par = parity(a)
        cliff = ConstMatrix.identity(2**m)
        for j in range(m):
            if a[j]:
                cliff = cliff @ build_gamma(m, j + 1)
        cliff = cliff.scale(i_power(f_exponent(a, n, phase)))
        use_gamma = sum(a[:m]) & 1
        for fam, x in _families(r, par).items():
            inner = x @ gmat if use_gamma else x
            basis.append(
                Generator(
                    f"{fam}_{bits_label(a)}", fam, bits_label(a), a,
                    tensor(cliff, inner, a), r.scale.get(fam, 0),
                )
            )
    params = {"n": n, "algebra": r.name}
    if phase != "product":
        params["phase"] = phase
    return GradedModel(n, basis, "cl2nm2", params, r)


def build_cl2n(r: SuperRealization, n: int = 3) -> GradedModel:
    """Lift through Cl(2n) without a grading matrix: i^(w(w-1)/2) prod_j g_j^(a_j) (x) X_|a|."""
    if n < 2:
        raise ValueError("n must be at least 2")
    basis = []
    for a in all_degrees(n):
        w = sum(a)
        cliff = ConstMatrix.identity(2**n)
        for j in range(n):
            if a[j]:
                cliff = cliff @ build_gamma(n, j + 1)
        cliff = cliff.scale(i_power((w * (w - 1) // 2) & 1))
        for fam, x in _families(r, w & 1).items():
            basis.append(
                Generator(
                    f"{fam}_{bits_label(a)}", fam, bits_label(a), a,
                    tensor(cliff, x, a), r.scale.get(fam, 0),
                )
            )
    return GradedModel(n, basis, "cl2n", {"n": n, "algebra": r.name}, r)


# Greek-indexed Cl(6) construction; index 0 stands for the identity matrix.
GREEK_DEGREES: dict[int, Degree] = {0: (1, 1, 1), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}


def greek_degree(indices: Sequence[int], odd_degrees=GREEK_DEGREES) -> Degree:
    deg: Degree = (0, 0, 0)
    for mu in indices:
        deg = deg_add(deg, odd_degrees[mu])
    return deg


def greek_phase(indices: Sequence[int], odd_degrees=GREEK_DEGREES) -> GaussianRational:
    """Phase in front of gamma_mu gamma_nu ... for a W with the given index word."""
    r = len(indices)
    if r <= 1:
        return ONE
    if r == 2:
        return i_power(1 - deg_dot(odd_degrees[indices[0]], odd_degrees[indices[1]]))
    if r in (3, 4):
        return i_power(1)
    raise ValueError("Greek index words have length at most 4")


def greek_label(indices: Sequence[int]) -> str:
    return "".join(str(mu) for mu in indices) if indices else "000"


def normalize_indices(indices: Sequence[int], odd_degrees=GREEK_DEGREES) -> tuple[tuple[int, ...], GaussianRational]:
    """Rewrite W_(indices) as factor * W_(canonical).

    The word is sorted with g_mu g_nu = (-1)^(1 - a_mu . a_nu) g_nu g_mu for
    mu != nu, and adjacent repeats cancel since g_mu^2 = 1.  The canonical key
    is the strictly increasing tuple of surviving indices; () is the (0,0,0)
    element.
    """
    word = list(indices)
    if len(word) > 4:
        raise ValueError("at most four Greek indices")
    for mu in word:
        if mu not in odd_degrees:
            raise ValueError(f"invalid Greek index {mu}")
    sign = 1
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(word) - 1:
            mu, nu = word[k], word[k + 1]
            if mu == nu:
                del word[k : k + 2]
                changed = True
                continue
            if mu > nu:
                word[k], word[k + 1] = nu, mu
                if deg_dot(odd_degrees[mu], odd_degrees[nu]) == 0:
                    sign = -sign
                changed = True
            k += 1
    factor = greek_phase(indices, odd_degrees) * sign / greek_phase(word, odd_degrees)
    return tuple(word), factor


def greek_gamma(indices: Sequence[int], m: int = 3) -> ConstMatrix:
    out = ConstMatrix.identity(2**m)
    for mu in indices:
        if mu:
            out = out @ build_gamma(m, mu)
    return out


def cl6b_labels() -> list[tuple[int, ...]]:
    labels: list[tuple[int, ...]] = [()]
    for r in (1, 2, 3, 4):
        labels.extend(itertools.combinations(range(4), r))
    return labels


def build_cl6b(r: SuperRealization) -> GradedModel:
    """Cl(6) lift with Greek labels: 1, g_mu, g_mu g_nu, g_mu g_nu g_rho, g_1 g_2 g_3."""
    basis = []
    for idx in cl6b_labels():
        deg = greek_degree(idx)
        par = len(idx) & 1
        cliff = greek_gamma(idx).scale(greek_phase(idx))
        label = greek_label(idx)
        for fam, x in _families(r, par).items():
            basis.append(Generator(f"{fam}_{label}", fam, label, deg, tensor(cliff, x, deg), r.scale.get(fam, 0)))
    return GradedModel(3, basis, "cl6b", {"n": 3, "algebra": r.name}, r)


# ------------------------------------------------------------ verification


def _thread_count(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get("GRADEDSUSY_THREADS", "1") or 1)
    return max(1, threads)


def _row_products(args: tuple[MatrixOp, list[MatrixOp]]) -> list[MatrixOp]:
    left, ops = args
    return [matmul(left, op) for op in ops]


def _all_products(ops: list[MatrixOp], threads: int) -> list[list[MatrixOp]]:
    if threads == 1:
        return [_row_products((a, ops)) for a in ops]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        # map preserves input order, so the merge is schedule independent
        return list(pool.map(_row_products, [(a, ops) for a in ops], chunksize=1))


def verify_closure(m: GradedModel, threads: Optional[int] = None, keep_brackets: bool = True) -> BracketTable:
    """Decompose every ordered bracket in its degree slice; raise ClosureViolation on failure.

    Graded antisymmetry and linear independence of the basis are checked on
    the way; both failures also raise.
    """
    if not m.basis:
        raise ValueError("empty basis")
    ops = [g.op for g in m.basis]
    independence = EchelonBasis()
    rank = sum(independence.add(op.flat(), k) for k, op in enumerate(ops))
    if rank != len(ops):
        raise ValueError(f"basis is linearly dependent (rank {rank} < {len(ops)})")
    slices = m.slices()
    solvers = {deg: SpanDecomposer([ops[k] for k in idx]) for deg, idx in slices.items()}
    products = _all_products(ops, _thread_count(threads))
    entries: dict[tuple[int, int], list[tuple[int, BetaPoly]]] = {}
    brackets: dict[tuple[int, int], MatrixOp] = {}
    minus = GaussianRational(-1)
    for i, gi in enumerate(m.basis):
        for j, gj in enumerate(m.basis):
            s = deg_dot(gi.degree, gj.degree)
            res = combination(
                [(ONE, products[i][j]), (ONE if s else minus, products[j][i])], m.dim
            )
            target = deg_add(gi.degree, gj.degree)
            if res.is_zero():
                entries[(i, j)] = []
            elif target not in solvers:
                raise ClosureViolation((gi.name, gj.name), res)
            else:
                try:
                    cs = solvers[target].decompose(res)
                except NotInSpan as exc:
                    raise ClosureViolation((gi.name, gj.name), exc.residual) from None
                entries[(i, j)] = [(slices[target][k], c) for k, c in enumerate(cs) if c]
            if keep_brackets:
                brackets[(i, j)] = res.with_degree(target)
    for i, gi in enumerate(m.basis):
        for j in range(i, len(m.basis)):
            gj = m.basis[j]
            sym = -1 if deg_dot(gi.degree, gj.degree) == 0 else 1
            a = dict(entries[(i, j)])
            b = {k: c * sym for k, c in entries[(j, i)]}
            if a != b:
                raise ClosureViolation((gi.name, gj.name), None)
    log.info("closure: %d ordered pairs of %s", len(entries), m.kind)
    return BracketTable(entries, brackets)


def with_closure(m: GradedModel, threads: Optional[int] = None) -> GradedModel:
    if m.bracket_table is not None:
        return m
    return replace(m, bracket_table=verify_closure(m, threads))


def _sign(a: Degree, b: Degree) -> int:
    return -1 if deg_dot(a, b) else 1


def _apply_table(table: BracketTable, i: int, vec: dict[int, BetaPoly], acc: dict[int, BetaPoly], sign: int) -> None:
    for k, c in vec.items():
        for l, d in table.entries[(i, k)]:
            acc[l] = acc.get(l, BetaPoly()) + c * d * sign


def verify_jacobi(
    m: GradedModel,
    mode: str = "operator",
    triples: Optional[Iterable[tuple[int, int, int]]] = None,
    threads: Optional[int] = None,
) -> dict:
    """Graded Jacobi sum over unordered triples (with repetition).

    ``mode`` picks how the outer bracket is formed:
      structure  -- structure constants only;
      operator   -- linear combinations of the computed bracket operators;
      direct     -- fresh operator products for both brackets (slow).
    """
    if mode not in ("structure", "operator", "direct"):
        raise ValueError(f"unknown Jacobi mode {mode!r}")
    m = with_closure(m, threads)
    table = m.bracket_table
    assert table is not None
    n = len(m.basis)
    if triples is None:
        triples = itertools.combinations_with_replacement(range(n), 3)
    degs = [g.degree for g in m.basis]
    checked = 0
    violations = []
    for i, j, k in triples:
        a, b, c = degs[i], degs[j], degs[k]
        cyc = ((i, j, k, _sign(a, c)), (j, k, i, _sign(b, a)), (k, i, j, _sign(c, b)))
        checked += 1
        if mode == "structure":
            acc: dict[int, BetaPoly] = {}
            for x, y, z, s in cyc:
                _apply_table(table, x, table.coeffs(y, z), acc, s)
            bad = {l: v for l, v in acc.items() if v}
            if bad:
                violations.append({"triple": [m.basis[t].name for t in (i, j, k)], "residual": {m.basis[l].name: str(v) for l, v in bad.items()}})
        else:
            if mode == "operator":
                terms = [
                    (BetaPoly.const(s) * cf, table.brackets[(x, w)])
                    for x, y, z, s in cyc
                    for w, cf in table.entries[(y, z)]
                ]
                total = combination(terms, m.dim)
            else:
                parts = []
                for x, y, z, s in cyc:
                    inner = graded_bracket(m.basis[y].op, degs[y], m.basis[z].op, degs[z])
                    outer = graded_bracket(m.basis[x].op, degs[x], inner, deg_add(degs[y], degs[z]))
                    parts.append((s, outer))
                total = combination(parts, m.dim)
            if not total.is_zero():
                violations.append({"triple": [m.basis[t].name for t in (i, j, k)], "residual": str(total)})
    return {
        "model": m.kind,
        "mode": mode,
        "generators": n,
        "triples_checked": checked,
        "violations": violations,
        "status": "pass" if not violations else "fail",
    }


def verify_hermiticity(m: GradedModel) -> dict:
    failing = [g.name for g in m.basis if g.op.adjoint() != g.op]
    return {
        "model": m.kind,
        "checked": len(m.basis),
        "non_hermitian": failing,
        "status": "pass" if not failing else "fail",
    }


def coupling_graph(m: GradedModel) -> list[list[int]]:
    """Connected components of the graph linking matrix indices coupled by some generator."""
    adj: dict[int, set[int]] = {v: set() for v in range(m.dim)}
    for g in m.basis:
        for i, j in g.op.entries:
            if i != j:
                adj[i].add(j)
                adj[j].add(i)
    seen: set[int] = set()
    comps = []
    for v in range(m.dim):
        if v in seen:
            continue
        comp, queue = [], deque([v])
        seen.add(v)
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def assign_component_degrees(m: GradedModel, seed: tuple[int, Degree] = (0, None)) -> list[Optional[Degree]]:
    """Propagate degrees over the coupling graph: entry (i, j) of a degree-d generator forces deg_i = deg_j + d.

    Components not reachable from the seed stay None.
    """
    start, start_deg = seed
    if start_deg is None:
        start_deg = (0,) * m.n
    edges: dict[int, list[tuple[int, Degree, str]]] = {v: [] for v in range(m.dim)}
    for g in m.basis:
        for i, j in g.op.entries:
            edges[j].append((i, g.degree, g.name))
            edges[i].append((j, g.degree, g.name))
    degs: list[Optional[Degree]] = [None] * m.dim
    degs[start] = tuple(start_deg)
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v, d, name in edges[u]:
            want = deg_add(degs[u], d)
            if degs[v] is None:
                degs[v] = want
                queue.append(v)
            elif degs[v] != want:
                raise InconsistentGrading(
                    f"component {v} gets degree {bits_label(want)} via {name} "
                    f"but already has {bits_label(degs[v])}"
                )
    return degs


def external_coefficient(m: GradedModel, i: int, j: int, k: int, coeff: BetaPoly) -> BetaPoly:
    """Convert a stored structure constant to the sqrt(2)-free external normalization.

    With X_stored = 2^(s_X/2) X_external, c_ext = c_stored * 2^((s_k - s_i - s_j)/2);
    the exponent is always even because brackets preserve total parity.
    """
    e = m.basis[k].scale - m.basis[i].scale - m.basis[j].scale
    if e % 2:
        raise ArithmeticError("odd sqrt(2) exponent; scale bookkeeping is inconsistent")
    factor = GaussianRational(2) ** (e // 2)
    return coeff * BetaPoly.const(factor)


def structure_constants(m: GradedModel, normalization: str = "external") -> list[dict]:
    """Flatten the bracket table into rows {left, right, bracket, target, coeff}."""
    m = with_closure(m)
    table = m.bracket_table
    rows = []
    for (i, j), terms in sorted(table.entries.items()):
        for k, c in terms:
            if normalization == "external":
                c = external_coefficient(m, i, j, k, c)
            rows.append(
                {
                    "left": m.basis[i].name,
                    "right": m.basis[j].name,
                    "bracket": bracket_sign(m.basis[i].degree, m.basis[j].degree),
                    "target": m.basis[k].name,
                    "coeff": c,
                }
            )
    return rows
