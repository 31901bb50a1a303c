"""Compare the compiled and pure-Python map-search kernels.

Runs the same searches with both kernels, checks that witnesses and node
counts agree, and prints one JSON line per workload plus a summary.

    python benchmarks/bench_kernel.py [--cells 25] [--repeat 1]
"""
from __future__ import annotations

import argparse
import json
import time

from simvol.l1 import Budget, semi_decide, simvol_events, tetrahedron_boundary, torus7, triangle
from simvol.l1.kernel import find_next_map_c, find_next_map_py


def stream_workload(make, cells):
    def go(find):
        events = list(simvol_events(make(), cells=cells, find=find))
        return [(e.cell, str(e.bound), e.nodes) for e in events]

    return go


def semi_workload(make, m, n, budget):
    def go(find):
        out = semi_decide(make(), m, n, budget, find=find)
        return out.status, out.nodes, getattr(out, "witness", None) and out.witness.dumps()

    return go


def timed(fn, find, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn(find)
        best = min(best, time.perf_counter() - t)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cells", type=int, default=25, help="stream cells for the sphere workload")
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args(argv)
    if find_next_map_c is None:
        raise SystemExit("compiled kernel not built; reinstall with Cython available")
    workloads = {
        "triangle stream, 120 cells": stream_workload(triangle, 120),
        f"sphere stream, {args.cells} cells": stream_workload(tetrahedron_boundary, args.cells),
        "triangle m=2 n=2 r<=2": semi_workload(triangle, 2, 2, Budget(2, 0)),
        "sphere m=1 n=3 r<=1 s<=1 (200k nodes)": semi_workload(tetrahedron_boundary, 1, 3, Budget(1, 1, 200_000)),
        "torus m=1 n=14": semi_workload(torus7, 1, 14, Budget(0, 0)),
    }
    total_c = total_py = 0.0
    for name, fn in workloads.items():
        tc, rc = timed(fn, find_next_map_c, args.repeat)
        tp, rp = timed(fn, find_next_map_py, args.repeat)
        total_c += tc
        total_py += tp
        print(json.dumps({"workload": name, "cython_s": round(tc, 3), "python_s": round(tp, 3),
                          "speedup": round(tp / tc, 1) if tc else None, "identical": rc == rp}))
    print(json.dumps({"total_cython_s": round(total_c, 3), "total_python_s": round(total_py, 3),
                      "speedup": round(total_py / total_c, 1)}))


if __name__ == "__main__":
    main()
