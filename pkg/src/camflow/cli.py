"""Command-line front end.

Subcommands: mine a dataset, gen(erate) datasets, bench(mark) algorithm
grids, eval(uate) mined patterns against a reference file. Exit codes:
0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .bench import run_bench, write_bench_csv
from .dataio import (
    Dataset,
    SyntheticConfig,
    convert_gps,
    gen_clique_reduction,
    gen_synthetic,
    load_dataset,
    load_patterns,
    read_cameras,
    read_trajectories,
    save_dataset,
    save_patterns,
    write_dataset,
    write_patterns,
)
from .evaluate import evaluate
from .miners import ALGORITHMS, VARIANTS, mine
from .model import CamflowError, DataFormatError, MiningParams


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this tool reserves 2 for
    data errors, so usage problems exit 1 instead."""

    def error(self, message: str):  # noqa: D102
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=int, default=60, help="max entrance gap in ticks")
    p.add_argument("--min-objects", type=int, default=3, metavar="M", help="smallest group size")
    p.add_argument("--min-cameras", type=int, default=5, metavar="K", help="shortest camera path")


def build_parser() -> _Parser:
    parser = _Parser(prog="camflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_mine = sub.add_parser("mine", help="mine co-movement patterns from a dataset CSV")
    p_mine.add_argument("dataset", help="dataset CSV file")
    _add_params(p_mine)
    p_mine.add_argument("--algo", choices=ALGORITHMS, default="tcs")
    p_mine.add_argument("--variant", choices=VARIANTS, default=None)
    p_mine.add_argument("--output", default=None, help="pattern file (default stdout)")

    p_gen = sub.add_parser("gen", help="generate or convert datasets")
    p_gen.add_argument(
        "--mode", choices=("synthetic", "reduction", "convert"), required=True
    )
    p_gen.add_argument("--output", default=None, help="dataset CSV (default stdout)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--cameras", type=int, default=100)
    p_gen.add_argument("--objects", type=int, default=50)
    p_gen.add_argument("--avg-path-len", type=float, default=10.0)
    p_gen.add_argument("--group-rate", type=float, default=0.3)
    p_gen.add_argument("--platoon-rate", type=float, default=0.0)
    p_gen.add_argument("--platoon-spread", type=int, default=0)
    p_gen.add_argument("--platoon-drift", type=int, default=None)
    p_gen.add_argument("--eps-scale", type=int, default=10)
    p_gen.add_argument("--horizon", type=int, default=10_000)
    p_gen.add_argument("--graph", help="reduction: JSON file with vertices and edges")
    p_gen.add_argument("--epsilon", type=int, default=60)
    p_gen.add_argument("--min-cameras", type=int, default=5, metavar="K")
    p_gen.add_argument("--trajectories", help="convert: track CSV object_id,ts,x,y")
    p_gen.add_argument("--camera-file", help="convert: placement CSV camera_id,x,y,radius[,group_id]")

    p_bench = sub.add_parser("bench", help="run a benchmark grid from a JSON config")
    p_bench.add_argument("config", help="JSON config file")
    p_bench.add_argument("--output", default=None, help="results CSV (default stdout)")
    p_bench.add_argument("--timeout-secs", type=float, default=None)

    p_eval = sub.add_parser("eval", help="score mined patterns against a reference file")
    p_eval.add_argument("mined", help="mined pattern file (JSON lines)")
    p_eval.add_argument("reference", help="reference pattern file (JSON lines)")
    p_eval.add_argument("--iou-threshold", type=float, default=0.8)
    return parser


def _cmd_mine(args) -> int:
    dataset = load_dataset(args.dataset)
    params = MiningParams(args.epsilon, args.min_objects, args.min_cameras)
    patterns = mine(list(dataset.paths), params, algo=args.algo, variant=args.variant)
    if args.output:
        save_patterns(patterns, args.output)
    else:
        write_patterns(patterns, sys.stdout)
    return 0


def _cmd_gen(args) -> int:
    if args.mode == "synthetic":
        cfg = SyntheticConfig(
            cameras=args.cameras,
            objects=args.objects,
            avg_path_len=args.avg_path_len,
            group_rate=args.group_rate,
            platoon_rate=args.platoon_rate,
            platoon_spread=args.platoon_spread,
            platoon_drift=args.platoon_drift,
            eps_scale=args.eps_scale,
            horizon=args.horizon,
        )
        dataset = gen_synthetic(cfg, seed=args.seed)
    elif args.mode == "reduction":
        if not args.graph:
            raise ValueError("--mode reduction needs --graph")
        with open(args.graph, "r", encoding="utf-8") as fh:
            try:
                spec = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{args.graph}: bad JSON: {exc}") from None
        try:
            n = int(spec["vertices"])
            edges = [(int(a), int(b)) for a, b in spec["edges"]]
        except (KeyError, TypeError, ValueError):
            raise DataFormatError(
                f"{args.graph}: expected {{\"vertices\": n, \"edges\": [[a,b],...]}}"
            ) from None
        dataset = gen_clique_reduction(n, edges, args.epsilon, args.min_cameras).dataset
    else:
        if not args.trajectories or not args.camera_file:
            raise ValueError("--mode convert needs --trajectories and --camera-file")
        with open(args.trajectories, "r", encoding="utf-8", newline="") as fh:
            tracks = read_trajectories(fh, source=args.trajectories)
        with open(args.camera_file, "r", encoding="utf-8", newline="") as fh:
            cameras = read_cameras(fh, source=args.camera_file)
        dataset = convert_gps(tracks, cameras)
    if args.output:
        save_dataset(dataset, args.output)
    else:
        write_dataset(dataset, sys.stdout)
    return 0


def _bench_dataset(spec) -> Dataset:
    if isinstance(spec, str):
        return load_dataset(spec)
    if isinstance(spec, dict) and "synthetic" in spec:
        cfg = SyntheticConfig(**spec["synthetic"])
        return gen_synthetic(cfg, seed=int(spec.get("seed", 0)))
    raise DataFormatError("bench config: dataset must be a CSV path or {synthetic: {...}}")


def _cmd_bench(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{args.config}: bad JSON: {exc}") from None
    try:
        dataset = _bench_dataset(cfg["dataset"])
        algorithms = list(cfg["algorithms"])
        d = cfg.get("defaults", {})
        defaults = MiningParams(int(d.get("epsilon", 60)), int(d.get("m", 3)), int(d.get("k", 5)))
        sweeps = {str(kn): [int(v) for v in vals] for kn, vals in cfg.get("sweeps", {}).items()}
        repetitions = int(cfg.get("repetitions", 3))
        timeout = cfg.get("timeout_secs")
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"{args.config}: bad bench config: {exc}") from None
    if args.timeout_secs is not None:
        timeout = args.timeout_secs
    results = run_bench(
        dataset,
        algorithms,
        defaults,
        sweeps=sweeps,
        repetitions=repetitions,
        timeout_secs=float(timeout) if timeout is not None else None,
    )
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_bench_csv(results, fh)
    else:
        write_bench_csv(results, sys.stdout)
    return 0


def _cmd_eval(args) -> int:
    mined = load_patterns(args.mined)
    reference = load_patterns(args.reference)
    result = evaluate(mined, reference, iou_threshold=args.iou_threshold)
    print(result.formatted())
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits itself on usage errors and --help; keep main() a
        # plain function that reports the code instead
        return int(exc.code or 0)
    handlers = {"mine": _cmd_mine, "gen": _cmd_gen, "bench": _cmd_bench, "eval": _cmd_eval}
    try:
        return handlers[args.command](args)
    except CamflowError as exc:
        print(f"camflow: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"camflow: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"camflow: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
