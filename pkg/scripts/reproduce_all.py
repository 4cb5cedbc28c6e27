"""Regenerate every report (verification, structure constants, spectra) into one directory."""

import argparse
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from gradedsusy.cli import main as cli


@dataclass
class ReproduceConfig:
    out: Path = Path("results")
    kinds: tuple[str, ...] = ("cl4", "cl2n", "cl6b")
    spectrum_kinds: tuple[str, ...] = ("cl4", "cl6b")
    betas: tuple[str, ...] = ("2", "3/2", "7/3")
    levels: int = 4
    general_n: tuple[int, ...] = (4,)
    threads: int = 1
    extra: dict = field(default_factory=dict)


def run(cfg: ReproduceConfig) -> dict[str, int]:
    cfg.out.mkdir(parents=True, exist_ok=True)
    codes = {}

    def call(name: str, *argv: str) -> None:
        codes[name] = cli([*argv, "--json", str(cfg.out / f"{name}.json")])
        print(f"{name:40s} exit {codes[name]}")

    call("gamma_m2", "gamma", "--m", "2", "--verify")
    call("gamma_m3", "gamma", "--m", "3", "--verify")
    for kind in cfg.kinds:
        call(f"verify_all_{kind}", "verify-all", "--kind", kind, "--threads", str(cfg.threads))
        call(f"structure_constants_{kind}", "structure-constants", "--kind", kind)
    for n in cfg.general_n:
        call(f"verify_all_cl4_n{n}", "verify-all", "--kind", "cl4", "--n", str(n), "--threads", str(cfg.threads))
        call(f"hermiticity_cl4_n{n}", "verify", "hermiticity", "--kind", "cl4", "--n", str(n))
        call(f"hermiticity_cl4_n{n}_pairwise", "verify", "hermiticity", "--kind", "cl4", "--n", str(n), "--phase", "pairwise")
    for kind in cfg.spectrum_kinds:
        for beta in cfg.betas:
            tag = beta.replace("/", "_")
            call(f"spectrum_{kind}_beta{tag}", "spectrum", "--kind", kind, "--beta", beta, "--levels", str(cfg.levels))
    (cfg.out / "config.json").write_text(json.dumps({k: str(v) for k, v in asdict(cfg).items()}, indent=2) + "\n")
    return codes


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=ReproduceConfig.out)
    ap.add_argument("--levels", type=int, default=ReproduceConfig.levels)
    ap.add_argument("--threads", type=int, default=ReproduceConfig.threads)
    args = ap.parse_args()
    codes = run(ReproduceConfig(out=args.out, levels=args.levels, threads=args.threads))
    # the printed-phase n=4 hermiticity report is expected to fail
    expected_fail = {k for k in codes if k.startswith("hermiticity_") and not k.endswith("pairwise")}
    bad = {k: c for k, c in codes.items() if (c != 0) != (k in expected_fail)}
    print("unexpected exit codes:" if bad else "all exit codes as expected", bad or "")
    raise SystemExit(1 if bad else 0)
