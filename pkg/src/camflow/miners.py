"""Front door for mining: one entry point, several interchangeable routes.

Algorithms:
  tcs      index-based miner: temporal clusters -> meta-clusters ->
           suffix-tree candidate runs -> sliding-window verification ->
           hashed dominance removal.
  cmc      cluster-scan baseline with per-camera buffers.
  apriori  level-wise baseline over the camera-network path lattice.
  fsm      sequence-mining baseline: camera-token index, intersect
           verification, naive dominance removal.
  oracle   exhaustive desk-scale reference.

Ablation variants of tcs (what the index buys, piece by piece):
  v1       naive dominance removal instead of hashed.
  v2       buffer-intersection verification over whole camera
           timelines instead of sliding windows over meta slices.
  v3       camera tokens instead of meta-cluster tokens.
"""

from __future__ import annotations

from typing import Sequence

from .baselines import mine_apriori, mine_cmc
from .clustering import (
    CameraTimeline,
    MetaCluster,
    TokenSequence,
    build_meta_clusters,
    build_timelines,
    encode_objects,
    temporal_clusters,
)
from .model import (
    CoMovementPattern,
    MiningParams,
    TravelPath,
    attach_spans,
)
from .oracle import mine_bruteforce
from .tcs import (
    CandidateSequence,
    TcsTree,
    build_tcs_tree,
    count_frequent_substrings,
    encode_camera_tokens,
    frequent_sequences,
    substring_maximal,
)
from .verify import (
    MiningStats,
    VerifyUnit,
    eliminate_dominated_hashed,
    eliminate_dominated_naive,
    intersect_verify,
    sliding_window_verify,
)

ALGORITHMS = ("tcs", "cmc", "apriori", "fsm", "oracle")
VARIANTS = ("v1", "v2", "v3")


def _camera_unit(timeline: CameraTimeline, params: MiningParams) -> VerifyUnit:
    """A whole camera timeline as one verification unit (unfiltered tokens)."""
    tcs = temporal_clusters(timeline, params.epsilon, params.m)
    ranges = tuple((tc.lo, tc.hi) for tc in tcs)
    return VerifyUnit(timeline.camera, timeline.records, ranges)


def _index_pipeline(
    paths: Sequence[TravelPath],
    params: MiningParams,
    stats: MiningStats,
    camera_tokens: bool,
    intersect: bool,
    naive_eliminator: bool,
) -> list[CoMovementPattern]:
    if camera_tokens:
        sequences, camera_of = encode_camera_tokens(paths)
        timelines = build_timelines(paths)
        units = {
            tok: _camera_unit(timelines[cam], params) for tok, cam in camera_of.items()
        }
    else:
        timelines = build_timelines(paths)
        metas = build_meta_clusters(timelines, params)
        sequences = encode_objects(metas, paths)
        if intersect:
            # buffer-intersection verification scans whole camera
            # timelines, the way the cluster-scan baseline does; the
            # meta-cluster time slices only help the sliding verifier
            by_camera = {cam: _camera_unit(tl, params) for cam, tl in timelines.items()}
            units = {mc.id: by_camera[mc.camera] for mc in metas}
        else:
            units = {mc.id: VerifyUnit.from_meta_cluster(mc) for mc in metas}

    index = build_tcs_tree(sequences)
    stats.frequent_runs = count_frequent_substrings(index, params.m)
    candidates = substring_maximal(frequent_sequences(index, params.m, params.k))
    stats.candidates = len(candidates)

    found: set[tuple] = set()

    def emit(entries, path) -> None:
        found.add((tuple(sorted({o for o, _ in entries})), path))

    verifier = intersect_verify if intersect else sliding_window_verify
    for cand in candidates:
        verifier([units[t] for t in cand.tokens], params, stats, emit)

    pats = [CoMovementPattern(objs, path) for objs, path in found]
    stats.patterns_pre_dominance = len(pats)
    eliminate = eliminate_dominated_naive if naive_eliminator else eliminate_dominated_hashed
    return eliminate(pats)


def mine(
    paths: Sequence[TravelPath],
    params: MiningParams,
    algo: str = "tcs",
    variant: str | None = None,
    stats: MiningStats | None = None,
) -> list[CoMovementPattern]:
    """Mine all non-dominated co-movement patterns of a dataset.

    Returns patterns in canonical order (path, then members) with spans
    attached. Every algorithm returns the same set; they differ in cost.
    variant applies to tcs only.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; pick one of {ALGORITHMS}")
    if variant is not None and algo != "tcs":
        raise ValueError("variants only apply to the tcs algorithm")
    if variant is not None and variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; pick one of {VARIANTS}")
    stats = stats if stats is not None else MiningStats()
    paths = list(paths)

    if algo == "oracle":
        pats = mine_bruteforce(paths, params)
    elif algo == "cmc":
        pats = mine_cmc(paths, params, stats)
    elif algo == "apriori":
        pats = mine_apriori(paths, params, stats)
    elif algo == "fsm":
        pats = _index_pipeline(
            paths, params, stats, camera_tokens=True, intersect=True, naive_eliminator=True
        )
    else:
        pats = _index_pipeline(
            paths,
            params,
            stats,
            camera_tokens=(variant == "v3"),
            intersect=(variant == "v2"),
            naive_eliminator=(variant == "v1"),
        )
    return attach_spans(pats, paths)
