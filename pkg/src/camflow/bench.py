"""Benchmark grid runner: algorithms x parameter sweeps over one dataset.

Sweeps vary one parameter at a time around the defaults, the usual way
these miners are profiled. Each cell runs one untimed warm-up plus a
configurable number of timed repetitions and reports the median wall
time together with the result size and the miner's own counters. The
timeout is cooperative: it is checked between runs, so one oversized run
finishes before its cell is marked as timed out.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from typing import Sequence, TextIO

from .dataio import Dataset
from .miners import mine
from .model import MiningParams
from .verify import MiningStats

BENCH_COLUMNS = [
    "algo",
    "variant",
    "swept",
    "epsilon",
    "m",
    "k",
    "repetitions",
    "median_wall_s",
    "pattern_count",
    "intersection_ops",
    "peak_candidates",
    "status",
]


@dataclass(frozen=True)
class BenchResult:
    algo: str
    variant: str | None
    swept: str
    epsilon: int
    m: int
    k: int
    repetitions: int
    median_wall_s: float
    pattern_count: int
    intersection_ops: int
    peak_candidates: int
    status: str

    def row(self) -> list:
        return [
            self.algo,
            self.variant or "",
            self.swept,
            self.epsilon,
            self.m,
            self.k,
            self.repetitions,
            f"{self.median_wall_s:.6f}",
            self.pattern_count,
            self.intersection_ops,
            self.peak_candidates,
            self.status,
        ]


def _parse_algo(spec: str) -> tuple[str, str | None]:
    if ":" in spec:
        algo, variant = spec.split(":", 1)
        return algo, variant
    return spec, None


def bench_cell(
    dataset: Dataset,
    algo: str,
    variant: str | None,
    params: MiningParams,
    swept: str,
    repetitions: int = 3,
    timeout_secs: float | None = None,
) -> BenchResult:
    """Time one (algorithm, parameter) cell. Dataset loading is not
    included; the mining call covers clustering, indexing and verification."""
    paths = list(dataset.paths)
    times: list[float] = []
    stats = MiningStats()
    patterns = 0
    status = "ok"
    runs = repetitions + 1  # first run warms up and is discarded
    started = time.perf_counter()
    for rep in range(runs):
        if timeout_secs is not None and time.perf_counter() - started > timeout_secs:
            status = "timeout"
            break
        stats = MiningStats()
        t0 = time.perf_counter()
        result = mine(paths, params, algo=algo, variant=variant, stats=stats)
        elapsed = time.perf_counter() - t0
        patterns = len(result)
        if rep > 0:
            times.append(elapsed)
    if not times:
        if status != "timeout":
            status = "no-data"
        median = float("nan")
    else:
        median = statistics.median(times)
        if status == "timeout":
            status = "partial"
    return BenchResult(
        algo=algo,
        variant=variant,
        swept=swept,
        epsilon=params.epsilon,
        m=params.m,
        k=params.k,
        repetitions=len(times),
        median_wall_s=median,
        pattern_count=patterns,
        intersection_ops=stats.intersection_ops,
        peak_candidates=stats.peak_candidates,
        status=status,
    )


def run_bench(
    dataset: Dataset,
    algorithms: Sequence[str],
    defaults: MiningParams,
    sweeps: dict[str, Sequence[int]] | None = None,
    repetitions: int = 3,
    timeout_secs: float | None = None,
) -> list[BenchResult]:
    """One row per algorithm per swept value; no sweeps means one row per
    algorithm at the defaults."""
    cells: list[tuple[str, MiningParams]] = []
    if not sweeps:
        cells.append(("defaults", defaults))
    else:
        for knob in sorted(sweeps):
            for value in sweeps[knob]:
                kw = {"epsilon": defaults.epsilon, "m": defaults.m, "k": defaults.k}
                if knob not in kw:
                    raise ValueError(f"unknown sweep knob {knob!r}")
                kw[knob] = value
                cells.append((knob, MiningParams(**kw)))
    out: list[BenchResult] = []
    for spec in algorithms:
        algo, variant = _parse_algo(spec)
        for swept, params in cells:
            out.append(
                bench_cell(
                    dataset,
                    algo,
                    variant,
                    params,
                    swept,
                    repetitions=repetitions,
                    timeout_secs=timeout_secs,
                )
            )
    return out


def write_bench_csv(results: Sequence[BenchResult], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for r in results:
        writer.writerow(r.row())
