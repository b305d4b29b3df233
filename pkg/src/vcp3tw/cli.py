"""Command-line front end: ``solve``, ``gen`` and ``bench``."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import bench
from .cutcount import decide_constrained_cvcp3, minimize_cvcp3
from .decomposition import (InvalidDecomposition, emit_td, heuristic_decompose,
                            make_nice, parse_td, validate)
from .graph import GraphFormatError, emit_pace_gr, is_vcp3_set, parse_graph
from .oracle import CVCP3_GUARD, FAMILIES, InstanceSpec, brute_cvcp3, brute_vcp3, generate
from .report import RunReport
from .vcp3 import solve_vcp3

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2, 3
ORACLE_GUARD = 20


class CliError(Exception):
    pass


class OracleMismatch(Exception):
    pass


def _vertex_list(text: str | None, base: int, n: int) -> list[int]:
    if not text:
        return []
    try:
        verts = [int(x) - base for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"bad vertex list {text!r}") from None
    if any(not 0 <= v < n for v in verts):
        raise CliError(f"vertex list {text!r} out of range")
    return sorted(set(verts))


def cmd_solve(args) -> RunReport:
    fmt = args.graph_format
    base = 1 if fmt == "pace-gr" else 0
    times = {}
    start = time.perf_counter()
    try:
        g = parse_graph(Path(args.graph).read_bytes(), fmt)
        td = parse_td(Path(args.td).read_bytes()) if args.td else None
    except (OSError, GraphFormatError) as exc:
        raise CliError(str(exc)) from exc
    times["parse"] = time.perf_counter() - start

    start = time.perf_counter()
    if td is None:
        td = heuristic_decompose(g, args.heuristic)
    else:
        problems = validate(td, g)
        if problems:
            raise CliError("invalid tree decomposition: " + problems[0].message)
    try:
        nd = make_nice(td, g)
    except InvalidDecomposition as exc:
        raise CliError(str(exc)) from exc
    times["decompose"] = time.perf_counter() - start

    report = RunReport(problem=args.problem, answer=None, width_used=nd.width,
                       node_counts=nd.counts(), wall_time=times)
    start = time.perf_counter()
    if args.problem == "vcp3":
        size, witness = solve_vcp3(g, nd, convolution=args.convolution, threads=args.threads)
        if not is_vcp3_set(g, witness) or len(witness) != size:
            raise CliError("internal error: witness failed verification")
        report.answer = size
        report.witness = [v + base for v in witness]
    else:
        s = _vertex_list(args.S, base, g.n)
        report.seed, report.repetitions = args.seed, args.reps
        if args.k is not None:
            yes = decide_constrained_cvcp3(g, nd, s, args.k, args.seed, args.reps, args.threads)
            report.answer = "YES" if yes else "NO"
        else:
            best = minimize_cvcp3(g, nd, s, args.seed, args.reps, args.threads)
            report.answer = "no solution" if best is None else best
    times["solve"] = time.perf_counter() - start

    if args.oracle_check:
        if g.n > ORACLE_GUARD:
            report.oracle = "skipped"
        else:
            start = time.perf_counter()
            if args.problem == "vcp3":
                expected = brute_vcp3(g)[0]
            else:
                best = brute_cvcp3(g, _vertex_list(args.S, base, g.n)) if g.n <= CVCP3_GUARD else None
                if args.k is not None:
                    expected = "YES" if best is not None and best <= args.k else "NO"
                else:
                    expected = "no solution" if best is None else best
            times["oracle"] = time.perf_counter() - start
            report.oracle = "pass" if expected == report.answer else f"FAIL (expected {expected})"
    return report


def cmd_gen(args) -> list[Path]:
    spec = InstanceSpec(args.family, args.n, k=args.k, p=args.p, m=args.m, seed=args.seed)
    try:
        g, td = generate(spec)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    written = [out.with_suffix(".gr")]
    written[0].write_text(emit_pace_gr(g))
    if td is not None:
        written.append(out.with_suffix(".td"))
        written[1].write_text(emit_td(td, g.n))
    return written


def cmd_bench(args) -> list[dict]:
    specs = []
    for n in args.n:
        for k in args.k:
            for seed in range(args.seed, args.seed + args.instances):
                specs.append(InstanceSpec(args.family, n, k=k, p=args.p, m=args.m, seed=seed))
    try:
        return bench.sweep(specs, problem=args.problem, oracle=args.oracle,
                           heuristic=args.heuristic, convolution=args.convolution, reps=args.reps)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vcp3tw", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve VCP3 or connected VCP3 on one graph")
    p.add_argument("--problem", choices=["vcp3", "cvcp3"], required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--graph-format", choices=["pace-gr", "edge-list"], default="pace-gr")
    p.add_argument("--td", help="PACE .td decomposition (default: heuristic)")
    p.add_argument("--heuristic", choices=["min-degree", "min-fill"], default="min-degree")
    p.add_argument("--k", type=int, help="cvcp3 decision bound; omit to minimise")
    p.add_argument("--S", help="comma-separated vertices forced into the cvcp3 solution")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--convolution", choices=["auto", "fast", "naive"], default="auto")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--oracle-check", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--timings", action="store_true", help="include wall times in json output")

    p = sub.add_parser("gen", help="write a generated instance as .gr (+ .td)")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--p", type=float, default=0.3, help="edge deletion probability")
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path prefix")

    p = sub.add_parser("bench", help="time the solvers over generated instances")
    p.add_argument("--family", choices=FAMILIES, default="partial-k-tree")
    p.add_argument("--n", type=int, nargs="+", default=[60])
    p.add_argument("--k", type=int, nargs="+", default=[1, 2, 3, 4, 5])
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=3)
    p.add_argument("--problem", choices=["vcp3", "cvcp3"], default="vcp3")
    p.add_argument("--heuristic", choices=["min-degree", "min-fill"], default="min-degree")
    p.add_argument("--convolution", choices=["auto", "fast", "naive"], default="auto")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--csv", help="also write rows to this CSV file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            report = cmd_solve(args)
            out = report.to_json(args.timings) if args.format == "json" else report.to_text()
            sys.stdout.write(out)
            if report.oracle and report.oracle.startswith("FAIL"):
                return EXIT_MISMATCH
        elif args.command == "gen":
            for path in cmd_gen(args):
                print(path)
        else:
            rows = cmd_bench(args)
            sys.stdout.write(bench.format_table(rows))
            if args.csv:
                Path(args.csv).write_text(bench.to_csv(rows))
            if any(r["oracle_answer"] is not None and r["oracle_answer"] != r["answer"] for r in rows):
                return EXIT_MISMATCH
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
