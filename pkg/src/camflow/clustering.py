"""Per-camera temporal clustering and the cluster-token encoding of objects.

Each camera keeps a timeline of the visits it captured, sorted by entrance.
A temporal cluster is a maximal window of that timeline whose entrance
times pairwise differ by at most epsilon; windows with fewer than m
distinct objects are discarded. Clusters that chain-overlap (consecutive
ones sharing a member) merge into meta-clusters, and every object is then
re-encoded as the sequence of meta-cluster ids its visits fall into.
Visits that survive in no cluster are dropped and split the sequence.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .model import CameraId, MiningParams, ObjectId, TravelPath


class TimelineRecord(NamedTuple):
    """One visit as seen from its camera's timeline.

    visit_index is the position of the visit inside the object's travel
    path, which is what links records at consecutive cameras into runs.
    A plain tuple underneath: timelines hold hundreds of thousands of
    these, and construction cost shows up in every miner's profile.
    """

    object_id: ObjectId
    visit_index: int
    entrance: int
    exit: int


@dataclass(frozen=True)
class CameraTimeline:
    camera: CameraId
    records: tuple[TimelineRecord, ...]


class TemporalCluster(NamedTuple):
    """A maximal pairwise-reachable window of one camera's timeline.

    members are timeline records in entrance order; interval is
    [first entrance, last entrance]. lo/hi are the window's index range on
    the camera timeline, which downstream stages use to relate clusters
    without set operations.
    """

    camera: CameraId
    members: tuple[TimelineRecord, ...]
    interval: tuple[int, int]
    lo: int
    hi: int

    def entry_keys(self) -> tuple[tuple[ObjectId, int], ...]:
        return tuple((r.object_id, r.visit_index) for r in self.members)


def build_timelines(paths: Iterable[TravelPath]) -> dict[CameraId, CameraTimeline]:
    """Group visits by camera, sorted by (entrance, object id, visit index)."""
    buckets: dict[CameraId, list[TimelineRecord]] = {}
    for path in paths:
        for j, v in enumerate(path.visits):
            buckets.setdefault(v.camera, []).append(
                TimelineRecord(path.object_id, j, v.entrance, v.exit)
            )
    sort_key = operator.attrgetter("entrance", "object_id", "visit_index")
    out: dict[CameraId, CameraTimeline] = {}
    for cam in sorted(buckets):
        recs = sorted(buckets[cam], key=sort_key)
        out[cam] = CameraTimeline(cam, tuple(recs))
    return out


def temporal_clusters(
    timeline: CameraTimeline, epsilon: int, m: int
) -> list[TemporalCluster]:
    """Two-anchor sweep emitting the maximal epsilon-windows of a timeline.

    The left anchor trails the right one: the window grows while the
    entrance gap to the left anchor stays within epsilon, is emitted on
    violation, then shrinks from the left until the new record fits. A
    final window is emitted at the end of the timeline. Windows whose
    distinct-object count is below m are dropped. Clusters may overlap;
    exact duplicates are removed.
    """
    recs = timeline.records
    n = len(recs)
    out: list[TemporalCluster] = []
    seen: set[tuple[int, int]] = set()

    def emit(lo: int, hi: int) -> None:
        if (lo, hi) in seen:
            return
        seen.add((lo, hi))
        members = recs[lo : hi + 1]
        if len({r.object_id for r in members}) < m:
            return
        out.append(
            TemporalCluster(
                camera=timeline.camera,
                members=members,
                interval=(members[0].entrance, members[-1].entrance),
                lo=lo,
                hi=hi,
            )
        )

    if n == 0:
        return out
    left = 0
    right = 1
    while right < n:
        if recs[right].entrance - recs[left].entrance <= epsilon:
            right += 1
            continue
        emit(left, right - 1)
        while recs[right].entrance - recs[left].entrance > epsilon:
            left += 1
    emit(left, n - 1)
    return out


class MetaCluster(NamedTuple):
    """Union of chain-overlapping temporal clusters at one camera.

    members is a contiguous slice of the camera timeline in entrance
    order. tc_ranges are the constituent clusters' index ranges relative
    to members (inclusive), in temporal order. The id doubles as the
    token of this meta-cluster in object sequences; ids are dense over
    the whole dataset in (camera, start time) order.
    """

    id: int
    camera: CameraId
    members: tuple[TimelineRecord, ...]
    tc_ranges: tuple[tuple[int, int], ...]
    interval: tuple[int, int]


def merge_meta_clusters(
    clusters: Sequence[TemporalCluster], first_id: int = 0
) -> list[MetaCluster]:
    """Merge one camera's clusters, in temporal order, by shared members.

    A cluster joins the open meta-cluster iff it shares at least one
    member with it; otherwise the open one is closed and a new one starts.
    """
    metas: list[MetaCluster] = []
    open_members: list[TimelineRecord] = []
    open_index: dict[tuple[ObjectId, int], int] = {}
    open_ranges: list[tuple[int, int]] = []
    camera: CameraId | None = None

    def close() -> None:
        nonlocal open_members, open_index, open_ranges
        if open_members:
            metas.append(
                MetaCluster(
                    id=first_id + len(metas),
                    camera=camera if camera is not None else "",
                    members=tuple(open_members),
                    tc_ranges=tuple(open_ranges),
                    interval=(open_members[0].entrance, open_members[-1].entrance),
                )
            )
        open_members = []
        open_index = {}
        open_ranges = []

    ordered = sorted(clusters, key=lambda tc: (tc.interval[0], tc.interval[1], tc.lo))
    for tc in ordered:
        if camera is not None and tc.camera != camera:
            raise ValueError("merge_meta_clusters expects clusters of a single camera")
        camera = tc.camera
        keys = tc.entry_keys()
        if open_members and not any(k in open_index for k in keys):
            close()
        # Overlapping clusters share a suffix of the open member list when
        # they come from one timeline sweep, so appending only the unseen
        # members keeps the list in entrance order.
        for r, k in zip(tc.members, keys):
            if k not in open_index:
                open_index[k] = len(open_members)
                open_members.append(r)
        positions = [open_index[k] for k in keys]
        open_ranges.append((min(positions), max(positions)))
    close()
    return metas


def build_meta_clusters(
    timelines: Mapping[CameraId, CameraTimeline], params: MiningParams
) -> list[MetaCluster]:
    """Cluster every camera timeline and assign dense meta-cluster ids."""
    metas: list[MetaCluster] = []
    for cam in sorted(timelines):
        tcs = temporal_clusters(timelines[cam], params.epsilon, params.m)
        metas.extend(merge_meta_clusters(tcs, first_id=len(metas)))
    return metas


@dataclass(frozen=True)
class TokenSequence:
    """One object's visit history re-encoded as token segments.

    Segments are the maximal runs of consecutive visits that all landed in
    some meta-cluster; a dropped visit ends the current segment.
    """

    object_id: ObjectId
    segments: tuple[tuple[int, ...], ...]


def encode_objects(
    meta_clusters: Sequence[MetaCluster], paths: Iterable[TravelPath]
) -> list[TokenSequence]:
    """Rewrite each travel path as meta-cluster token segments."""
    token_of: dict[tuple[ObjectId, int], int] = {}
    for mc in meta_clusters:
        for r in mc.members:
            token_of[(r.object_id, r.visit_index)] = mc.id

    out: list[TokenSequence] = []
    for path in paths:
        segments: list[tuple[int, ...]] = []
        current: list[int] = []
        for j in range(len(path.visits)):
            tok = token_of.get((path.object_id, j))
            if tok is None:
                if current:
                    segments.append(tuple(current))
                    current = []
            else:
                current.append(tok)
        if current:
            segments.append(tuple(current))
        out.append(TokenSequence(path.object_id, tuple(segments)))
    return out
