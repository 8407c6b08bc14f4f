#!/usr/bin/env python3
"""Benchmark the compiled term-arithmetic kernel against the pure fallback.

The workload is the hot path of the toolkit: Groebner bases and syzygies
with exact rational arithmetic. Forcing the fallback is done per-process via
POISKIT_PURE=1, so this script re-executes itself once per backend.

usage: python benchmarks/bench_kernel.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def workload() -> dict[str, float]:
    from poiskit._kernel import termops
    from poiskit.polyalg import Polynomial, parse_polynomial
    from poiskit.modcalc import SubmodulePresentation, syzygies
    from poiskit.poisson import PoissonStructure, almost_regular_decide

    timings: dict[str, float] = {}

    V = ("x", "y", "z", "w")
    p = lambda s: parse_polynomial(V, s)

    start = time.perf_counter()
    gens = [p("x + y + z + w"), p("x*y + y*z + z*w + w*x"),
            p("x*y*z + y*z*w + z*w*x + w*x*y"), p("x*y*z*w - 1")]
    for _ in range(10):
        SubmodulePresentation.ideal(V, gens).groebner_basis()
    timings["groebner_cyclic4_x10"] = time.perf_counter() - start

    start = time.perf_counter()
    gens = [p("x^2 + y^2 + z^2 + w^2 - 1"), p("x*y - z*w"), p("x*z + y*w - 1")]
    for _ in range(10):
        SubmodulePresentation.ideal(V, gens).groebner_basis()
    timings["groebner_quadrics_x10"] = time.perf_counter() - start

    start = time.perf_counter()
    zero = Polynomial.zero(V)
    rows = [[zero, p("-z"), p("y"), p("x*w")],
            [p("z"), zero, p("-x"), p("y^2")],
            [p("-y"), p("x"), zero, p("z*w - 1")]]
    for _ in range(20):
        syzygies(rows)
    timings["syzygies_3x4_x20"] = time.perf_counter() - start

    start = time.perf_counter()
    quad = PoissonStructure.from_components(
        ("x1", "y1", "x2", "y2"), {(0, 1): "x1^2 + y1^2"})
    for _ in range(10):
        almost_regular_decide(quad)
    timings["decision_quadratic_x10"] = time.perf_counter() - start

    # raw kernel loop: repeated sparse products and reduction steps
    dense = (p("x + y + z + w + 1") ** 5).terms
    other = (p("x - y + 2*z - w + 1") ** 4).terms
    start = time.perf_counter()
    acc = {}
    for _ in range(60):
        prod = termops.t_mul(dense, other)
        acc = termops.t_axpy(acc, 1, (1, 0, 0, 0), prod)
    timings["termops_mul_axpy_x60"] = time.perf_counter() - start

    return timings


def run_child(pure: bool, repeat: int) -> dict[str, float]:
    env = dict(os.environ)
    if pure:
        env["POISKIT_PURE"] = "1"
    else:
        env.pop("POISKIT_PURE", None)
    out = subprocess.run(
        [sys.executable, __file__, "--child", "--repeat", str(repeat)],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--child", action="store_true")
    args = parser.parse_args()

    if args.child:
        import poiskit

        best: dict[str, float] = {}
        for _ in range(args.repeat):
            for name, dt in workload().items():
                best[name] = min(best.get(name, float("inf")), dt)
        best["__backend__"] = poiskit.KERNEL_BACKEND  # type: ignore[assignment]
        print(json.dumps(best))
        return 0

    compiled = run_child(pure=False, repeat=args.repeat)
    pure = run_child(pure=True, repeat=args.repeat)
    if compiled.pop("__backend__") == "python":
        print("compiled kernel unavailable; both runs used the python backend")
    pure.pop("__backend__")

    width = max(len(k) for k in pure)
    print(f"{'workload'.ljust(width)}  {'python':>10}  {'cython':>10}  {'speedup':>8}")
    for name in sorted(pure):
        ratio = pure[name] / compiled[name] if compiled[name] else float("inf")
        print(f"{name.ljust(width)}  {pure[name]:>10.4f}  {compiled[name]:>10.4f}  {ratio:>7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
