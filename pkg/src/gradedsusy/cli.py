"""Command line entry point: ``gradedsusy <command> ...``.

Every command prints (or writes) a deterministic JSON report; numbers are
exact rational strings.  Exit codes: 0 all pass/computed, 1 verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import __version__
from .clifford import build_gamma, verify_clifford
from .graded import (
    ClosureViolation,
    GammaMissing,
    GradedModel,
    InconsistentGrading,
    bits_label,
    coupling_graph,
    structure_constants,
    verify_gamma_condition,
    verify_hermiticity,
    verify_jacobi,
    with_closure,
)
from .scalars import parse_rational
from .scqm import REFERENCE_FGH, build_ladder, build_model, cl6b_fgh, verify_osp12, verify_oscillator
from .spectrum import NoNormalizableSolution, excited_levels, formal_ground_states, eigen_check, grade_components

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
KINDS = ("cl4", "cl2nm2", "cl2n", "cl6b")


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    model: dict = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)
    timing: dict[str, float] = field(default_factory=dict)

    def add(self, name: str, status: str, **details) -> dict:
        entry = {"name": name, "status": status, **details}
        self.checks.append(entry)
        return entry

    @property
    def status(self) -> str:
        return "fail" if any(c["status"] == "fail" for c in self.checks) else "pass"

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timing[name] = round(time.perf_counter() - t0, 3)

    def to_json(self, timing: bool = False) -> dict:
        out = {"command": self.command, "model": self.model, "status": self.status, "checks": self.checks}
        if timing:
            out["timing"] = self.timing
        return out


def _model_meta(m: GradedModel) -> dict:
    return {"kind": m.kind, "n": m.n, "generators": len(m.basis), "dim": m.dim, "params": m.params}


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(args, data) -> None:
    text = _dump(data)
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_model(args) -> GradedModel:
    if getattr(args, "model", None):
        try:
            with open(args.model, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read model file: {exc}") from None
        if data.get("format") != "gradedsusy.model/1":
            raise UsageError("model file has an unknown format")
        return GradedModel.from_json(data)
    if not getattr(args, "kind", None):
        raise UsageError("give --kind or --model")
    return build_model(args.kind, args.n, phase=getattr(args, "phase", "product"))


def _closure_check(report: RunReport, m: GradedModel, threads) -> Optional[GradedModel]:
    with report.phase("closure"):
        try:
            m = with_closure(m, threads)
        except ClosureViolation as exc:
            residual = str(exc.residual) if exc.residual is not None else "antisymmetry"
            report.add("closure", "fail", pair=list(exc.pair), residual=residual)
            return None
    pairs = len(m.bracket_table.entries)
    report.add("closure", "pass", ordered_pairs=pairs)
    return m


def _jacobi_check(report: RunReport, m: GradedModel, mode: str, threads) -> None:
    with report.phase("jacobi"):
        res = verify_jacobi(m, mode=mode, threads=threads)
    report.add("jacobi", res["status"], mode=mode, triples_checked=res["triples_checked"], violations=res["violations"][:10])


def _graph_check(report: RunReport, m: GradedModel) -> None:
    comps = coupling_graph(m)
    if len(comps) == 1:
        report.add("coupling graph", "pass", components=comps, reducible=False)
    else:
        report.add("coupling graph", "computed", components=comps, reducible=True)


# ------------------------------------------------------------------ commands


def cmd_gamma(args) -> int:
    if args.verify:
        res = verify_clifford(args.m)
        _emit(args, res)
        return EXIT_OK if res["status"] == "pass" else EXIT_FAIL
    indices = [args.j] if args.j is not None else list(range(1, 2 * args.m + 1))
    try:
        out = {str(j): build_gamma(args.m, j).to_json() for j in indices}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "text":
        for j in indices:
            sys.stdout.write(f"gamma_{j} (m={args.m})\n{build_gamma(args.m, j)}\n")
        return EXIT_OK
    _emit(args, {"m": args.m, "dim": 2**args.m, "gamma": out})
    return EXIT_OK


def cmd_model_build(args) -> int:
    m = build_model(args.kind, args.n, phase=args.phase)
    _emit(args, m.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    m = _load_model(args)
    report = RunReport(f"verify {args.what}", _model_meta(m))
    if args.what == "gamma":
        if m.realization is None:
            raise UsageError("model has no realization to check")
        try:
            res = verify_gamma_condition(m.realization)
        except GammaMissing as exc:
            report.add("gamma condition", "fail", error=str(exc))
        else:
            report.add("gamma condition", res["status"], violations=res["violations"])
    elif args.what == "hermiticity":
        res = verify_hermiticity(m)
        report.add("hermiticity", res["status"], non_hermitian=res["non_hermitian"])
    else:
        closed = _closure_check(report, m, args.threads)
        if closed is not None and args.what == "jacobi":
            _jacobi_check(report, closed, args.mode, args.threads)
    _emit(args, report.to_json(args.timing))
    return EXIT_OK if report.status == "pass" else EXIT_FAIL


def cmd_scqm_build(args) -> int:
    m = build_model(args.kind)
    lad = build_ladder(m)
    out = {
        "model": _model_meta(m),
        "normalization": "a and a^dagger stored with a factor sqrt(2)",
        "R": lad.R0.to_json(),
        "F": lad.F.to_json(),
        "annihilation": {k: v.to_json() for k, v in sorted(lad.ann.items())},
        "creation": {k: v.to_json() for k, v in sorted(lad.cre.items())},
    }
    _emit(args, out)
    return EXIT_OK


def cmd_scqm_verify(args) -> int:
    m = build_model(args.kind)
    res = verify_oscillator(build_ladder(m))
    _emit(args, res)
    return EXIT_OK if res["status"] == "pass" else EXIT_FAIL


def cmd_verify_all(args) -> int:
    m = _load_model(args)
    report = RunReport("verify-all", _model_meta(m))
    report.model["degree_slices"] = {bits_label(d): len(ix) for d, ix in sorted(m.slices().items())}
    if m.n == 3 and m.realization is not None:
        with report.phase("osp12"):
            res = verify_osp12(m.realization)
        report.add("osp(1|2) relations", res["status"], pairs_checked=res["pairs_checked"])
        if m.kind == "cl2nm2":
            res = verify_gamma_condition(m.realization)
            report.add("gamma condition", res["status"], violations=res["violations"])
    closed = _closure_check(report, m, args.threads)
    if closed is not None:
        _jacobi_check(report, closed, args.mode, args.threads)
    if m.n == 3:
        with report.phase("hermiticity"):
            res = verify_hermiticity(m)
        report.add("hermiticity", res["status"], non_hermitian=res["non_hermitian"])
        with report.phase("oscillator"):
            res = verify_oscillator(build_ladder(m))
        failing = [c for c in res["checks"] if c["status"] == "fail"]
        computed = [c for c in res["checks"] if c["status"] == "computed"]
        report.add(
            "oscillator identities",
            res["status"],
            identities_checked=len(res["checks"]) - len(computed),
            failures=failing,
        )
        sign = sorted({c["computed_sign"] for c in computed if c["name"] == "[R, a^dagger] sign"}, key=str)
        report.add("[R, a^dagger] sign", "computed", computed=sign, reference=-1, discrepancy=sign != [-1])
        coeffs = sorted({c["coefficient"] for c in computed if c["name"].startswith("{a^dagger")}, key=str)
        report.add("{a^dagger, a^dagger} / L+", "computed", coefficients=coeffs)
        _graph_check(report, m)
        if len(coupling_graph(m)) == 1:
            try:
                degs = grade_components(m)
            except InconsistentGrading as exc:
                report.add("component grading", "fail", error=str(exc))
            else:
                report.add("component grading", "computed", degrees=[bits_label(d) for d in degs])
    _emit(args, report.to_json(args.timing))
    return EXIT_OK if report.status == "pass" else EXIT_FAIL


def _fmt_term(c, target: str) -> str:
    coeff = str(c.coeffs[0]) if c.degree == 0 else str(c)
    if coeff == "1":
        return target
    if coeff == "-1":
        return f"-{target}"
    if c.degree == 0 and c.coeffs[0].im == 0:
        return f"{coeff} {target}"
    return f"({coeff}) {target}"


def cmd_structure_constants(args) -> int:
    m = with_closure(_load_model(args), args.threads)
    rows = structure_constants(m, args.normalization)
    fgh = None
    if m.kind == "cl6b":
        fgh = {k: {idx: str(v) for idx, v in sorted(tab.items())} for k, tab in cl6b_fgh(m).items()}
    if args.format == "text":
        grouped: dict[tuple[str, str, str], list[str]] = {}
        for r in rows:
            grouped.setdefault((r["left"], r["right"], r["bracket"]), []).append(_fmt_term(r["coeff"], r["target"]))
        lines = []
        for (x, y, kind), terms in grouped.items():
            lo, hi = ("[", "]") if kind == "commutator" else ("{", "}")
            lines.append(f"{lo}{x}, {y}{hi} = " + " + ".join(terms).replace("+ -", "- "))
        if fgh is not None:
            for key, tab in fgh.items():
                lines.append(f"{key}: " + ", ".join(f"{key}{idx}={v}" for idx, v in tab.items()))
        text = "\n".join(lines) + "\n"
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    out = {
        "model": _model_meta(m),
        "normalization": args.normalization,
        "brackets": [{**r, "coeff": str(r["coeff"])} for r in rows],
    }
    if fgh is not None:
        ref = {k: {idx: str(v) for idx, v in sorted(tab.items())} for k, tab in REFERENCE_FGH.items()}
        out["fgh"] = fgh
        out["fgh_matches_reference"] = fgh == ref
    _emit(args, out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    try:
        beta = parse_rational(args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if beta <= 1:
        raise UsageError("--beta must exceed 1")
    if args.levels < 0:
        raise UsageError("--levels must be nonnegative")
    m = build_model(args.kind)
    lad = build_ladder(m)
    try:
        report = excited_levels(m, lad, beta, args.levels)
    except NoNormalizableSolution as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL
    out = report.to_json()
    rejected = formal_ground_states(lad, beta)["-" if report.normalizable_branch == "+" else "+"]
    energies = sorted({str(eigen_check(lad.R0, beta, v)) for v in rejected})
    out["rejected_branch"] = {"solutions": len(rejected), "energies": energies}
    _emit(args, out)
    return EXIT_OK


# -------------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser, kind: bool = True, kinds=KINDS) -> None:
    if kind:
        p.add_argument("--kind", choices=kinds, help="model family")
        p.add_argument("--n", type=int, default=3, help="number of Z2 factors (cl4/cl2n)")
        p.add_argument("--phase", choices=("product", "pairwise"), default="product", help="phase form of the cl4 lift")
    p.add_argument("--json", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: $GRADEDSUSY_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gradedsusy", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="Clifford generators")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("model", help="build and serialize a model")
    msub = p.add_subparsers(dest="action", required=True)
    q = msub.add_parser("build")
    _add_common(q)
    q.add_argument("--algebra", choices=("osp12",), default="osp12")
    q.set_defaults(func=cmd_model_build)

    p = sub.add_parser("verify", help="a single verification")
    p.add_argument("what", choices=("closure", "jacobi", "hermiticity", "gamma"))
    p.add_argument("--model", metavar="FILE", help="model JSON from 'model build'")
    p.add_argument("--mode", choices=("operator", "structure", "direct"), default="operator")
    p.add_argument("--timing", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scqm", help="ladder operators of a lifted model")
    ssub = p.add_subparsers(dest="action", required=True)
    q = ssub.add_parser("build")
    q.add_argument("--kind", choices=KINDS, required=True)
    q.add_argument("--json", metavar="PATH")
    q.set_defaults(func=cmd_scqm_build)
    q = ssub.add_parser("verify-oscillator")
    q.add_argument("--kind", choices=KINDS, required=True)
    q.add_argument("--json", metavar="PATH")
    q.set_defaults(func=cmd_scqm_verify)

    p = sub.add_parser("verify-all", help="every check for one model")
    p.add_argument("--model", metavar="FILE")
    p.add_argument("--mode", choices=("operator", "structure", "direct"), default="operator")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (not deterministic)")
    _add_common(p)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("structure-constants", help="full bracket table")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--normalization", choices=("external", "stored"), default="external")
    p.add_argument("--model", metavar="FILE")
    _add_common(p)
    p.set_defaults(func=cmd_structure_constants)

    p = sub.add_parser("spectrum", help="levels of R at rational beta")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--beta", default="2")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_spectrum)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) in ("verify-all", "structure-constants") and not (
        getattr(args, "kind", None) or getattr(args, "model", None)
    ):
        sys.stderr.write("error: give --kind or --model\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ClosureViolation as exc:
        sys.stderr.write(f"closure violation at {exc.pair}: {exc.residual}\n")
        return EXIT_FAIL
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
