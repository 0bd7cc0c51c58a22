#!/usr/bin/env python3
"""Stress sweep over random strongly connected instances.

Builds the resolution for each instance, runs the full verification, and
prints a timing/minimality summary line per instance.

Usage: python scripts/random_sweep.py [-n N] [--count C] [--seed S] [--max-degree D]
"""

import argparse
import pathlib
import random
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from cycres import cyc_complex, graph_core, resolution_verify


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-n", type=int, default=5, help="vertex count")
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-degree", type=int, default=None)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    failures = 0
    for run in range(args.count):
        g = resolution_verify.random_icb_digraph(args.n, rng)
        t0 = time.perf_counter()
        M = graph_core.prepare(graph_core.laplacian(g))
        C = cyc_complex.build_complex(M)
        d_max = args.max_degree
        if d_max is None:
            d_max = min(resolution_verify.default_d_max(C), 10)
        report = resolution_verify.full_verify(C, d_max=d_max, seed=args.seed)
        dt = time.perf_counter() - t0
        minimal, _ = cyc_complex.minimality_check(C)
        status = "ok" if report.passed else "FAIL"
        print(
            f"run {run:3d}: n={args.n} arcs={len(g.arcs)} nu={C.ctx.nu} "
            f"minimal={minimal} d_max={d_max} {dt:6.2f}s {status}"
        )
        if not report.passed:
            failures += 1
            print(report.to_text())
    print(f"{args.count - failures}/{args.count} instances verified")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
