"""Command line interface.

``poiskit analyze INPUT.json [INPUT2.json ...]`` runs the full pipeline and
prints a text report (``--json OUT`` additionally writes the machine-readable
document). ``--trace`` integrates the Hamiltonian flows from a starting point
and emits a CSV point cloud. Exit codes: 0 decision reached, 2 some stage
inconclusive, 1 error. Batch inputs run in parallel, one report each, in
input order; timing goes to stderr so reports stay byte-identical for a
fixed seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .polyalg import PolyParseError
from .report import AnalysisOptions, AnalysisReport, InputError, analyze, parse_input
from .trace import TraceBlowupError, trace_leaf, trace_to_csv

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poiskit",
        description="Analyze polynomial Poisson bivectors on a coordinate chart.")
    sub = parser.add_subparsers(dest="command", required=True)
    an = sub.add_parser("analyze", help="run the analysis pipeline on JSON inputs")
    an.add_argument("inputs", nargs="+", help="input JSON files")
    an.add_argument("--json", dest="json_out", metavar="OUT",
                    help="write the machine-readable report (single input only)")
    an.add_argument("--max-degree", type=int, default=4,
                    help="degree bound for the Casimir search (default 4)")
    an.add_argument("--samples", type=int, default=10000,
                    help="witness-search sample count (default 10000)")
    an.add_argument("--seed", type=int, default=0, help="witness-search seed (default 0)")
    an.add_argument("--skip-jacobi", action="store_true",
                    help="skip Jacobi verification (flagged in the report)")
    an.add_argument("--trace", metavar="X0",
                    help="comma-separated starting point for the leaf tracer")
    an.add_argument("--steps", type=int, default=10000, help="tracer steps (default 10000)")
    an.add_argument("--dt", type=float, default=1e-3, help="tracer step size (default 1e-3)")
    an.add_argument("--trace-out", metavar="CSV",
                    help="write the trace point cloud to a CSV file (default stdout)")
    return parser


def _run_one(path: str, options: AnalysisOptions) -> tuple[AnalysisReport | None, str | None]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return None, f"{path}: cannot read input: {exc}"
    try:
        return analyze(document, options), None
    except (InputError, PolyParseError, ValueError) as exc:
        return None, f"{path}: {exc}"


def _run_trace(args, document: dict) -> tuple[str | None, str | None]:
    structure, _ = parse_input(document)
    try:
        x0 = [float(v) for v in args.trace.split(",")]
    except ValueError:
        return None, f"bad --trace point {args.trace!r}"
    try:
        # conserve whatever the Casimir search finds (degree bound from options)
        from .poisson import casimir_search

        invariants = [p for p in casimir_search(structure, args.max_degree)
                      if p.total_degree() > 0]
        result = trace_leaf(structure, x0, steps=args.steps, dt=args.dt,
                            invariants=invariants)
    except (TraceBlowupError, ValueError) as exc:
        return None, f"trace failed: {exc}"
    csv = trace_to_csv(result, structure.variables)
    note = (f"# dimension estimate: {result.dimension_estimate}; "
            + "; ".join(f"drift[{k}] = {v:.3e}" for k, v in result.conserved_drift.items()))
    return csv, note


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    options = AnalysisOptions(max_degree=args.max_degree, samples=args.samples,
                              seed=args.seed, skip_jacobi=args.skip_jacobi)
    if args.json_out and len(args.inputs) > 1:
        print("--json requires a single input file", file=sys.stderr)
        return EXIT_ERROR

    started = time.perf_counter()
    if len(args.inputs) == 1:
        results = [_run_one(args.inputs[0], options)]
    else:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda p: _run_one(p, options), args.inputs))

    exit_code = EXIT_OK
    for path, (report, error) in zip(args.inputs, results):
        if error is not None:
            print(error, file=sys.stderr)
            exit_code = EXIT_ERROR
            continue
        if len(args.inputs) > 1:
            sys.stdout.write(f"==== {path} ====\n")
        sys.stdout.write(report.to_text())
        if report.inconclusive and exit_code == EXIT_OK:
            exit_code = EXIT_INCONCLUSIVE
        if args.json_out:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                fh.write(report.to_json())

    if args.trace and exit_code != EXIT_ERROR:
        if len(args.inputs) > 1:
            print("--trace requires a single input file", file=sys.stderr)
            return EXIT_ERROR
        with open(args.inputs[0], "r", encoding="utf-8") as fh:
            document = json.load(fh)
        csv, note = _run_trace(args, document)
        if csv is None:
            print(note, file=sys.stderr)
            return EXIT_ERROR
        if args.trace_out:
            with open(args.trace_out, "w", encoding="utf-8") as fh:
                fh.write(csv)
            print(note, file=sys.stderr)
        else:
            sys.stdout.write(csv)
            print(note, file=sys.stderr)

    print(f"elapsed: {time.perf_counter() - started:.3f}s", file=sys.stderr)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
