from __future__ import annotations

import csv
import io
import math

import pytest

from camflow import (
    Dataset,
    MiningParams,
    SyntheticConfig,
    gen_synthetic,
    run_bench,
    write_bench_csv,
)
from camflow.bench import BENCH_COLUMNS, bench_cell


@pytest.fixture(scope="module")
def small_dataset() -> Dataset:
    return gen_synthetic(
        SyntheticConfig(cameras=12, objects=16, avg_path_len=5.0, eps_scale=5), seed=2
    )


class TestRunBench:
    def test_grid_shape(self, small_dataset):
        results = run_bench(
            small_dataset,
            algorithms=["tcs", "cmc"],
            defaults=MiningParams(10, 2, 2),
            sweeps={"k": [1, 2, 3, 4, 5, 6, 7]},
            repetitions=1,
        )
        assert len(results) == 14
        assert {r.algo for r in results} == {"tcs", "cmc"}
        assert sorted({r.k for r in results}) == [1, 2, 3, 4, 5, 6, 7]
        assert all(r.swept == "k" for r in results)
        assert all(r.status == "ok" for r in results)

    def test_no_sweeps_runs_defaults_once(self, small_dataset):
        results = run_bench(
            small_dataset,
            algorithms=["tcs"],
            defaults=MiningParams(10, 2, 2),
            repetitions=1,
        )
        assert len(results) == 1
        assert results[0].swept == "defaults"
        assert (results[0].epsilon, results[0].m, results[0].k) == (10, 2, 2)

    def test_variant_specs_parse(self, small_dataset):
        results = run_bench(
            small_dataset,
            algorithms=["tcs:v2"],
            defaults=MiningParams(10, 2, 2),
            repetitions=1,
        )
        assert results[0].algo == "tcs"
        assert results[0].variant == "v2"
        assert results[0].intersection_ops >= 0

    def test_unknown_knob_rejected(self, small_dataset):
        with pytest.raises(ValueError, match="sweep knob"):
            run_bench(
                small_dataset,
                algorithms=["tcs"],
                defaults=MiningParams(10, 2, 2),
                sweeps={"zoom": [1]},
            )

    def test_pattern_counts_agree_across_algorithms(self, small_dataset):
        results = run_bench(
            small_dataset,
            algorithms=["tcs", "cmc", "apriori", "fsm"],
            defaults=MiningParams(10, 2, 2),
            sweeps={"m": [2, 3]},
            repetitions=1,
        )
        by_cell: dict[tuple, set[int]] = {}
        for r in results:
            by_cell.setdefault((r.epsilon, r.m, r.k), set()).add(r.pattern_count)
        assert all(len(counts) == 1 for counts in by_cell.values())


class TestBenchCell:
    def test_warm_up_run_is_discarded(self, small_dataset):
        r = bench_cell(small_dataset, "tcs", None, MiningParams(10, 2, 2), "defaults", repetitions=3)
        assert r.repetitions == 3
        assert r.status == "ok"
        assert r.median_wall_s > 0

    def test_timeout_before_any_timed_run(self, small_dataset):
        r = bench_cell(
            small_dataset,
            "tcs",
            None,
            MiningParams(10, 2, 2),
            "defaults",
            repetitions=3,
            timeout_secs=0.0,
        )
        assert r.status == "timeout"
        assert r.repetitions == 0
        assert math.isnan(r.median_wall_s)

    def test_zero_repetitions_yields_no_data(self, small_dataset):
        r = bench_cell(small_dataset, "tcs", None, MiningParams(10, 2, 2), "defaults", repetitions=0)
        assert r.status == "no-data"


class TestCsv:
    def test_header_and_formatting(self, small_dataset):
        results = run_bench(
            small_dataset, ["tcs"], MiningParams(10, 2, 2), repetitions=1
        )
        buf = io.StringIO()
        write_bench_csv(results, buf)
        rows = list(csv.reader(io.StringIO(buf.getvalue())))
        assert rows[0] == BENCH_COLUMNS
        assert len(rows) == 2
        # six fixed decimals for the median column
        assert len(rows[1][7].split(".")[1]) == 6
