"""Candidate verification and removal of dominated patterns.

A candidate token run fixes, per position, one camera together with the
timeline slice and cluster windows behind the token. Verification finds
every group of >= m objects whose visit runs thread through consecutive
positions while landing inside a shared cluster window at each one.

Two verifiers implement the same contract. The sliding-window verifier
advances per-candidate queues over each position's member list and emits
at window ends; it performs no object-set intersections at all. The
intersect verifier re-derives entries by intersecting buffered candidate
sets against every cluster window, the way the scan-based baselines do,
and is kept both as a baseline cost model and as a cross-check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .clustering import MetaCluster, TimelineRecord
from .model import CameraId, CoMovementPattern, MiningParams, ObjectId, occurrences

Entry = tuple[ObjectId, int]
EmitFn = Callable[[tuple[Entry, ...], tuple[CameraId, ...]], None]


@dataclass
class MiningStats:
    """Counters shared by miners; intersection_ops stays 0 on the
    sliding-window path by construction."""

    intersection_ops: int = 0
    peak_candidates: int = 0
    frequent_runs: int = 0
    candidates: int = 0
    patterns_pre_dominance: int = 0
    scan_passes: int = 0
    extras: dict = field(default_factory=dict)

    def saw_candidates(self, count: int) -> None:
        if count > self.peak_candidates:
            self.peak_candidates = count


@dataclass(frozen=True)
class VerifyUnit:
    """One candidate position: a camera, its member records in entrance
    order, and the cluster windows as inclusive index ranges."""

    camera: CameraId
    members: tuple[TimelineRecord, ...]
    tc_ranges: tuple[tuple[int, int], ...]

    def window_entries(self) -> list[tuple[Entry, ...]]:
        return [
            tuple((r.object_id, r.visit_index) for r in self.members[lo : hi + 1])
            for lo, hi in self.tc_ranges
        ]

    @classmethod
    def from_meta_cluster(cls, mc: MetaCluster) -> "VerifyUnit":
        return cls(mc.camera, mc.members, mc.tc_ranges)


def _distinct_objects(entries: Iterable[Entry]) -> int:
    return len({o for o, _ in entries})


def sliding_window_verify(
    units: Sequence[VerifyUnit],
    params: MiningParams,
    stats: MiningStats,
    emit: EmitFn,
) -> None:
    """Verify one candidate by sliding queues across its positions.

    Per position, each live candidate owns a queue. Records are scanned in
    entrance order and join the queues of candidates that contain the
    record's predecessor visit; this keeps runs consecutive without any
    set intersection. When the scan passes the end of a cluster window,
    stale queue entries (before the window start) are dropped and, if at
    least m distinct objects remain, the queue contents extend the
    candidate by this camera. Every window also seeds a fresh length-1
    candidate. Extensions reaching k cameras are emitted on creation,
    which yields the same result set as emitting held-over candidates
    round by round plus a final flush.
    """
    m, k = params.m, params.k
    live: list[tuple[tuple[CameraId, ...], tuple[Entry, ...]]] = []
    for unit in units:
        camera = unit.camera
        admit: dict[Entry, list[int]] = {}
        for ci, (_, entries) in enumerate(live):
            for o, v in entries:
                admit.setdefault((o, v + 1), []).append(ci)
        queues: list[deque[tuple[int, ObjectId, int]]] = [deque() for _ in live]
        # distinct-object count per queue, maintained on push and pop so
        # the m gate at each window end is a single comparison
        tallies: list[dict[ObjectId, int]] = [{} for _ in live]
        distinct = [0] * len(live)
        nonempty: set[int] = set()
        ends = {hi: lo for lo, hi in unit.tc_ranges}
        fresh: dict[tuple, tuple[tuple[CameraId, ...], tuple[Entry, ...]]] = {}
        admit_get = admit.get
        ends_get = ends.get

        for idx, rec in enumerate(unit.members):
            oid = rec.object_id
            for ci in admit_get((oid, rec.visit_index), ()):
                queues[ci].append((idx, oid, rec.visit_index))
                nonempty.add(ci)
                tally = tallies[ci]
                seen = tally.get(oid, 0)
                tally[oid] = seen + 1
                if seen == 0:
                    distinct[ci] += 1
            lo = ends_get(idx)
            if lo is None:
                continue
            # queues no record ever joined cannot pass the m gate; only
            # the touched ones are worth a scan at a window end
            for ci in sorted(nonempty):
                q = queues[ci]
                tally = tallies[ci]
                while q and q[0][0] < lo:
                    _, o, _ = q.popleft()
                    left = tally[o] - 1
                    if left:
                        tally[o] = left
                    else:
                        del tally[o]
                        distinct[ci] -= 1
                if not q:
                    nonempty.discard(ci)
                    continue
                if distinct[ci] < m:
                    continue
                new_path = live[ci][0] + (camera,)
                new_entries = tuple((o, v) for _, o, v in q)
                key = (new_path, new_entries)
                if key not in fresh:
                    fresh[key] = (new_path, new_entries)
                    if len(new_path) >= k:
                        emit(new_entries, new_path)

        for lo, hi in unit.tc_ranges:
            entries = tuple((r.object_id, r.visit_index) for r in unit.members[lo : hi + 1])
            key = ((camera,), entries)
            if key not in fresh:
                fresh[key] = ((camera,), entries)
                if k <= 1:
                    emit(entries, (camera,))
        live = list(fresh.values())
        stats.saw_candidates(len(live))


def intersect_verify(
    units: Sequence[VerifyUnit],
    params: MiningParams,
    stats: MiningStats,
    emit: EmitFn,
) -> None:
    """Verify one candidate by buffered set intersections, scan style.

    Each position intersects every cluster window against every buffered
    candidate (guarding run contiguity through predecessor visits), the
    cost model of the cluster-scan baselines. Every intersection performed
    is counted.
    """
    m, k = params.m, params.k
    live: list[tuple[tuple[CameraId, ...], frozenset[Entry]]] = []
    for unit in units:
        camera = unit.camera
        windows = unit.window_entries()
        fresh: dict[tuple, tuple[tuple[CameraId, ...], frozenset[Entry]]] = {}
        for win in windows:
            for path, entries in live:
                stats.intersection_ops += 1
                inter = frozenset((o, v) for o, v in win if (o, v - 1) in entries)
                if inter and _distinct_objects(inter) >= m:
                    new_path = path + (camera,)
                    key = (new_path, inter)
                    if key not in fresh:
                        fresh[key] = (new_path, inter)
                        if len(new_path) >= k:
                            emit(tuple(sorted(inter)), new_path)
            seed = frozenset(win)
            key = ((camera,), seed)
            if key not in fresh:
                fresh[key] = ((camera,), seed)
                if k <= 1:
                    emit(tuple(sorted(seed)), (camera,))
        live = list(fresh.values())
        stats.saw_candidates(len(live))


def _dedupe(patterns: Iterable[CoMovementPattern]) -> list[CoMovementPattern]:
    seen: dict[tuple, CoMovementPattern] = {}
    for p in patterns:
        seen.setdefault((p.objects, p.path), p)
    return list(seen.values())


def eliminate_dominated_naive(
    patterns: Iterable[CoMovementPattern],
) -> list[CoMovementPattern]:
    """Drop dominated patterns using an object-to-pattern inverted index.

    For each pattern only the posting list of its least frequent member is
    scanned, since any dominator must contain that member too.
    """
    pats = _dedupe(patterns)
    postings: dict[ObjectId, list[int]] = {}
    for i, p in enumerate(pats):
        for o in p.objects:
            postings.setdefault(o, []).append(i)
    out: list[CoMovementPattern] = []
    for i, p in enumerate(pats):
        rarest = min(p.objects, key=lambda o: len(postings[o]))
        objs = set(p.objects)
        dominated = False
        for j in postings[rarest]:
            if j == i:
                continue
            q = pats[j]
            if objs.issubset(q.objects) and occurrences(p.path, q.path):
                if len(q.objects) > len(objs) or len(q.path) > len(p.path):
                    dominated = True
                    break
        if not dominated:
            out.append(p)
    out.sort(key=CoMovementPattern.key)
    return out


def eliminate_dominated_hashed(
    patterns: Iterable[CoMovementPattern],
) -> list[CoMovementPattern]:
    """Drop dominated patterns via two hash tables, no pairwise scan.

    On verifier output, any dominated pattern has a dominator sharing its
    exact path (with more objects) or its exact object set (with a longer
    path); see the closure argument in the verifier docstring. Bucketing
    by path and by object set therefore finds a witness for every
    dominated pattern.
    """
    pats = _dedupe(patterns)
    by_path: dict[tuple[CameraId, ...], list[int]] = {}
    by_objects: dict[tuple[ObjectId, ...], list[int]] = {}
    for i, p in enumerate(pats):
        by_path.setdefault(p.path, []).append(i)
        by_objects.setdefault(p.objects, []).append(i)
    for bucket in by_objects.values():
        # longest dominator first, so dominated runs exit on an early probe
        bucket.sort(key=lambda j: len(pats[j].path), reverse=True)
    out: list[CoMovementPattern] = []
    for i, p in enumerate(pats):
        objs = set(p.objects)
        dominated = False
        for j in by_path.get(p.path, ()):
            q = pats[j]
            if len(q.objects) > len(objs) and objs.issubset(q.objects):
                dominated = True
                break
        if not dominated:
            for j in by_objects.get(p.objects, ()):
                q = pats[j]
                if len(q.path) <= len(p.path):
                    break
                if occurrences(p.path, q.path):
                    dominated = True
                    break
        if not dominated:
            out.append(p)
    out.sort(key=CoMovementPattern.key)
    return out
