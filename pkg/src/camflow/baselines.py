"""Scan-based baseline miners over per-camera temporal clusters.

Both baselines work on the raw cluster lists, without the meta-cluster
index, and pay for it in object-set intersections. They exist as cost
references and as independent routes to the same answer set.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .clustering import TemporalCluster, build_timelines, temporal_clusters
from .model import (
    CameraId,
    CameraNetwork,
    CoMovementPattern,
    MiningParams,
    ObjectId,
    TravelPath,
    build_camera_network,
)
from .verify import Entry, MiningStats, eliminate_dominated_naive

Candidate = tuple[tuple[CameraId, ...], frozenset[Entry]]


def _all_clusters(
    paths: Sequence[TravelPath], params: MiningParams
) -> list[TemporalCluster]:
    timelines = build_timelines(paths)
    out: list[TemporalCluster] = []
    for cam in sorted(timelines):
        out.extend(temporal_clusters(timelines[cam], params.epsilon, params.m))
    out.sort(key=lambda tc: (tc.interval[0], tc.camera, tc.interval[1], tc.lo))
    return out


def _pattern(entries: Iterable[Entry], path: tuple[CameraId, ...]) -> CoMovementPattern:
    return CoMovementPattern.of((o for o, _ in entries), path)


def mine_cmc(
    paths: Sequence[TravelPath],
    params: MiningParams,
    stats: MiningStats | None = None,
    network: CameraNetwork | None = None,
) -> list[CoMovementPattern]:
    """Cluster-scan miner with per-camera candidate buffers.

    Clusters from all cameras are scanned in ascending start time. Each
    cluster extends the candidates buffered at its camera (entry sets
    intersected under run contiguity), emits extensions whose path
    reaches k cameras, and propagates results and a fresh seed to the
    camera's out-neighbors.

    A single ascending pass is not enough: a cluster at a successor
    camera may start earlier than the cluster feeding it, so the scan is
    repeated until no buffer grows. Cursors ensure each (cluster, buffered
    candidate) pair is intersected exactly once, so extra passes cost
    nothing beyond the work they uncover.
    """
    stats = stats if stats is not None else MiningStats()
    net = network if network is not None else build_camera_network(paths)
    clusters = _all_clusters(paths, params)
    m, k = params.m, params.k

    entry_lists = [tc.entry_keys() for tc in clusters]
    buffers: dict[CameraId, list[Candidate]] = {c: [] for c in net.vertices}
    buffered_keys: dict[CameraId, set] = {c: set() for c in net.vertices}
    cursors = [0] * len(clusters)
    results: set[Candidate] = set()

    def push(camera: CameraId, cand: Candidate) -> None:
        key = (cand[0], cand[1])
        if key not in buffered_keys[camera]:
            buffered_keys[camera].add(key)
            buffers[camera].append(cand)

    for ti, tc in enumerate(clusters):
        seed: Candidate = ((tc.camera,), frozenset(entry_lists[ti]))
        if k <= 1:
            results.add(seed)
        for nb in net.out_neighbors(tc.camera):
            push(nb, seed)

    progress = True
    while progress:
        progress = False
        stats.scan_passes += 1
        for ti, tc in enumerate(clusters):
            cam = tc.camera
            buf = buffers[cam]
            start = cursors[ti]
            stop = len(buf)
            if start >= stop:
                continue
            progress = True
            cursors[ti] = stop
            tc_entries = entry_lists[ti]
            for bi in range(start, stop):
                path, entries = buf[bi]
                stats.intersection_ops += 1
                inter = frozenset((o, v) for o, v in tc_entries if (o, v - 1) in entries)
                if len({o for o, _ in inter}) < m:
                    continue
                new: Candidate = (path + (cam,), inter)
                if len(new[0]) >= k:
                    results.add(new)
                for nb in net.out_neighbors(cam):
                    push(nb, new)
        stats.saw_candidates(sum(len(b) for b in buffers.values()))

    pats = [_pattern(entries, path) for path, entries in results]
    stats.patterns_pre_dominance = len(pats)
    return eliminate_dominated_naive(pats)


def mine_apriori(
    paths: Sequence[TravelPath],
    params: MiningParams,
    stats: MiningStats | None = None,
    network: CameraNetwork | None = None,
) -> list[CoMovementPattern]:
    """Level-wise miner over the camera-network path lattice.

    Level n holds, per length-n path, the surviving run sets. A length
    n+1 path is considered only when both its length-n prefix and suffix
    survived; the new run sets come from aligned intersections of the
    parents' run sets. Run sets below m distinct objects are pruned, as
    are run sets subsumed by a sibling, which is safe because any group
    within the subsumed runs is also within the subsuming ones.
    """
    stats = stats if stats is not None else MiningStats()
    net = network if network is not None else build_camera_network(paths)
    clusters = _all_clusters(paths, params)
    m, k = params.m, params.k

    level: dict[tuple[CameraId, ...], list[frozenset[Entry]]] = {}
    for tc in clusters:
        level.setdefault((tc.camera,), []).append(frozenset(tc.entry_keys()))

    results: set[tuple[tuple[CameraId, ...], frozenset[Entry]]] = set()
    if k <= 1:
        for path, fams in level.items():
            results.update((path, fam) for fam in fams)

    def prune_subsumed(fams: list[frozenset[Entry]]) -> list[frozenset[Entry]]:
        fams = sorted(set(fams), key=lambda f: (-len(f), sorted(f)))
        kept: list[frozenset[Entry]] = []
        for f in fams:
            if not any(f < g for g in kept):
                kept.append(f)
        return kept

    length = 1
    while level:
        stats.saw_candidates(sum(len(f) for f in level.values()))
        nxt: dict[tuple[CameraId, ...], list[frozenset[Entry]]] = {}
        for p1 in sorted(level):
            for nb in net.out_neighbors(p1[-1]):
                p2 = p1[1:] + (nb,)
                fam2 = level.get(p2)
                if fam2 is None:
                    continue
                grown: list[frozenset[Entry]] = []
                for o1 in level[p1]:
                    for o2 in fam2:
                        stats.intersection_ops += 1
                        inter = frozenset((o, v) for o, v in o1 if (o, v + 1) in o2)
                        if len({o for o, _ in inter}) >= m:
                            grown.append(inter)
                grown = prune_subsumed(grown)
                if grown:
                    newp = p1 + (nb,)
                    nxt[newp] = grown
                    if length + 1 >= k:
                        results.update((newp, fam) for fam in grown)
        level = nxt
        length += 1

    pats = [_pattern(entries, path) for path, entries in results]
    stats.patterns_pre_dominance = len(pats)
    return eliminate_dominated_naive(pats)
