"""Timing sweeps over generated instances."""

from __future__ import annotations

import csv
import io
import statistics
import time
from collections import defaultdict

from .cutcount import minimize_cvcp3
from .decomposition import heuristic_decompose, make_nice
from .oracle import CVCP3_GUARD, InstanceSpec, brute_cvcp3, brute_vcp3, generate
from .vcp3 import solve_vcp3

COLUMNS = ["family", "n", "m", "k", "seed", "width", "answer", "solve_time", "oracle_answer", "oracle_time"]
ORACLE_LIMIT = 16


def run_instance(spec: InstanceSpec, problem: str = "vcp3", oracle: bool = False,
                 heuristic: str = "min-degree", convolution: str = "auto",
                 reps: int = 20) -> dict:
    g, td = generate(spec)
    if td is None:
        td = heuristic_decompose(g, heuristic)
    nd = make_nice(td, g)
    start = time.perf_counter()
    if problem == "vcp3":
        answer, _ = solve_vcp3(g, nd, convolution=convolution, check=False, shortcut=False)
    else:
        answer = minimize_cvcp3(g, nd, (), seed=spec.seed, repetitions=reps)
    row = {
        "family": spec.family, "n": g.n, "m": g.m, "k": spec.k, "seed": spec.seed,
        "width": nd.width, "answer": answer, "solve_time": time.perf_counter() - start,
        "oracle_answer": None, "oracle_time": None,
    }
    if oracle and g.n <= (ORACLE_LIMIT if problem == "vcp3" else min(ORACLE_LIMIT, CVCP3_GUARD)):
        start = time.perf_counter()
        row["oracle_answer"] = brute_vcp3(g)[0] if problem == "vcp3" else brute_cvcp3(g)
        row["oracle_time"] = time.perf_counter() - start
    return row


def sweep(specs, **kwargs) -> list[dict]:
    return [run_instance(s, **kwargs) for s in specs]


def summarize(rows: list[dict]) -> dict[int, float]:
    """Median solve time per decomposition width."""
    by_width = defaultdict(list)
    for r in rows:
        by_width[int(r["width"])].append(float(r["solve_time"]))
    return {w: statistics.median(ts) for w, ts in sorted(by_width.items())}


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: ("" if r[k] is None else r[k]) for k in COLUMNS})
    return buf.getvalue()


def _cell(key: str, text: str):
    if text == "":
        return None
    if key == "family":
        return text
    if key.endswith("time"):
        return float(text)
    return int(text)


def from_csv(text: str) -> list[dict]:
    return [{k: _cell(k, v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


def format_table(rows: list[dict]) -> str:
    lines = ["family          n     m  k  seed width answer   solve_s  oracle"]
    for r in rows:
        oracle = "-" if r["oracle_answer"] is None else f"{r['oracle_answer']} ({r['oracle_time']:.3f}s)"
        lines.append(f"{r['family']:<14}{r['n']:>4}{r['m']:>6}{r['k']:>3}{r['seed']:>6}"
                     f"{r['width']:>6}{str(r['answer']):>7}{r['solve_time']:>10.4f}  {oracle}")
    lines.append("")
    lines.append("median solve time by width:")
    for w, t in summarize(rows).items():
        lines.append(f"  width {w}: {t:.4f}s")
    return "\n".join(lines) + "\n"
