#!/usr/bin/env python3
"""Classify, resolve and verify every bundled instance file.

Usage: python scripts/run_bundled_instances.py [--max-degree D]
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from cycres import cyc_complex, graph_core, intlinalg, resolution_verify
from cycres.errors import NotIrreducibleError

INSTANCES = pathlib.Path(__file__).resolve().parent.parent / "instances"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-degree", type=int, default=None)
    args = ap.parse_args()

    for path in sorted(INSTANCES.glob("*.json")):
        print(f"=== {path.name}")
        g = graph_core.parse_digraph(path.read_text())
        L = graph_core.laplacian(g)
        cls = graph_core.classify(L)
        if cls == "CB":
            print("  class CB (reducible), skipping resolution")
            continue
        mu = intlinalg.adjugate_row(L.signed_rows())
        nu = intlinalg.grading_vector(mu)
        M = graph_core.prepare(L)
        print(f"  class {cls}, mu={mu}, nu={nu}, blocks={M.echelon}, perm={M.perm}")
        C = cyc_complex.build_complex(M)
        minimal, _ = cyc_complex.minimality_check(C)
        print(f"  ranks {C.ranks()}, minimal={minimal}")
        d_max = args.max_degree
        if d_max is None:
            d_max = resolution_verify.default_d_max(C)
        t0 = time.perf_counter()
        report = resolution_verify.full_verify(C, d_max=d_max, instance=path.name)
        dt = time.perf_counter() - t0
        status = "all passed" if report.passed else "FAILED"
        print(f"  verification ({dt:.2f} s, degree bound {d_max}): {status}")
        if not report.passed:
            print(report.to_text())


if __name__ == "__main__":
    main()
