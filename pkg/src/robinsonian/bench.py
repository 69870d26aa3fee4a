"""Timing harness: sweep and recognition times over a grid of instance sizes.

Instances are generated in memory, so file I/O and weight quantization are
never inside a timed region.
"""

from __future__ import annotations

import csv
import gc
import io
import time
from dataclasses import astuple, dataclass, fields
from typing import Iterable

from .instances import random_robinsonian, random_unit_interval
from .recognize import recognize
from .sfs import sfs, sfs_plus


@dataclass
class BenchRow:
    kind: str
    n: int
    m: int
    sweeps: int
    sweep_seconds: float
    total_seconds: float
    ns_per_edge: float


def make_instance(kind: str, n: int, seed: int, width: int = 12):
    """Benchmark instance; ``width`` bounds interval length (about ``0.65 * width`` edges per vertex)."""
    if kind == "random_robinsonian":
        A, _ = random_robinsonian(n, n, seed, max_width=width)
        return A
    if kind == "binary":
        # expected degree ~ width: n unit intervals over n / (width / 2) units
        density = 1.0 / (n / width + 1)
        return random_unit_interval(n, density, seed, connected=True)
    raise ValueError(f"unknown bench kind {kind!r}")


def time_sweep(A, repeats: int = 3) -> float:
    """Best-of-``repeats`` wall time of one plus-sweep seeded by a plain sweep."""
    sigma = sfs(A)
    best = float("inf")
    for _ in range(max(1, repeats)):
        gc.collect()
        t0 = time.perf_counter()
        sfs_plus(A, sigma)
        best = min(best, time.perf_counter() - t0)
    return best


def run(grid: Iterable[int], kind: str = "random_robinsonian", seed: int = 0, width: int = 12,
        repeats: int = 3) -> list[BenchRow]:
    rows = []
    for i, n in enumerate(grid):
        if n <= 0:
            continue
        A = make_instance(kind, n, seed + i, width)
        per = time_sweep(A, repeats)
        gc.collect()
        t0 = time.perf_counter()
        report = recognize(A)
        total = time.perf_counter() - t0
        ns = per * 1e9 / A.m if A.m else 0.0
        rows.append(BenchRow(kind, n, A.m, report.sweeps_used, per, total, ns))
    return rows


def to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(BenchRow)])
    for r in rows:
        w.writerow([f"{v:.6g}" if isinstance(v, float) else v for v in astuple(r)])
    return buf.getvalue()


def to_text(rows: list[BenchRow]) -> str:
    head = f"{'kind':<20}{'n':>9}{'m':>10}{'sweeps':>8}{'sweep_s':>11}{'total_s':>11}{'ns/edge':>10}"
    lines = [head]
    for r in rows:
        lines.append(
            f"{r.kind:<20}{r.n:>9}{r.m:>10}{r.sweeps:>8}{r.sweep_seconds:>11.4f}"
            f"{r.total_seconds:>11.4f}{r.ns_per_edge:>10.0f}"
        )
    return "\n".join(lines) + "\n"
