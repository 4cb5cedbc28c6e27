"""Wall-clock timings of closure and the three Jacobi modes, per model and thread count."""

import argparse
import itertools
import time
from dataclasses import dataclass

from gradedsusy.graded import verify_closure, verify_jacobi, with_closure
from gradedsusy.scqm import build_model


@dataclass
class BenchConfig:
    kinds: tuple[str, ...] = ("cl4", "cl2n", "cl6b")
    threads: tuple[int, ...] = (1, 2)
    direct_sample: int = 500


def bench(cfg: BenchConfig) -> list[dict]:
    rows = []
    for kind in cfg.kinds:
        for t in cfg.threads:
            m = build_model(kind)
            t0 = time.perf_counter()
            table = verify_closure(m, threads=t)
            rows.append({"kind": kind, "phase": "closure", "threads": t, "seconds": time.perf_counter() - t0, "size": len(table.entries)})
        m = with_closure(build_model(kind))
        n = len(m.basis)
        for mode in ("structure", "operator", "direct"):
            triples = itertools.combinations_with_replacement(range(n), 3)
            if mode == "direct":
                triples = itertools.islice(triples, cfg.direct_sample)
            t0 = time.perf_counter()
            res = verify_jacobi(m, mode=mode, triples=triples)
            assert res["status"] == "pass"
            rows.append({"kind": kind, "phase": f"jacobi/{mode}", "threads": 1, "seconds": time.perf_counter() - t0, "size": res["triples_checked"]})
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--direct-sample", type=int, default=BenchConfig.direct_sample)
    args = ap.parse_args()
    print(f"{'model':6s} {'phase':18s} {'thr':>3s} {'items':>6s} {'seconds':>8s}")
    for r in bench(BenchConfig(direct_sample=args.direct_sample)):
        print(f"{r['kind']:6s} {r['phase']:18s} {r['threads']:3d} {r['size']:6d} {r['seconds']:8.3f}")
