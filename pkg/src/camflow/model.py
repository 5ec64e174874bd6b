"""Core data model for camera-sequence trajectories and co-movement patterns.

A moving object is recorded as a travel path: the time-ordered list of
camera visits, each visit an interval [entrance, exit] in integer ticks.
A co-movement pattern is a group of objects that traverse the same
consecutive camera sequence while staying pairwise close in time: at every
camera on the shared path the gap between any two members' entrance times
is at most epsilon. Patterns are reported only when no other pattern
dominates them (same or larger group over the same or longer path).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

CameraId = str
ObjectId = str


class CamflowError(Exception):
    """Base class for errors raised by this package."""


class PathValidationError(CamflowError):
    """A travel path violates the visit interval invariants."""


class DataFormatError(CamflowError):
    """An input file cannot be parsed into the data model."""


@dataclass(frozen=True)
class Visit:
    """One stay at a camera: closed interval [entrance, exit] in ticks."""

    camera: CameraId
    entrance: int
    exit: int


@dataclass(frozen=True)
class TravelPath:
    """A single object's time-ordered camera visits.

    Invariants (enforced by validate_path): visits are sorted by entrance,
    each visit has entrance <= exit, and consecutive visits do not overlap
    (exit < next entrance). Zero-length dwell is allowed.
    """

    object_id: ObjectId
    visits: tuple[Visit, ...]

    def cameras(self) -> tuple[CameraId, ...]:
        return tuple(v.camera for v in self.visits)

    def __len__(self) -> int:
        return len(self.visits)


@dataclass(frozen=True)
class MiningParams:
    """Thresholds of the mining problem.

    epsilon: largest allowed entrance-time gap between two group members
        at any camera of the shared path.
    m: minimum number of distinct objects in a group.
    k: minimum number of consecutive cameras in the shared path.
    """

    epsilon: int
    m: int
    k: int

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True, order=True)
class CoMovementPattern:
    """A group of objects sharing a consecutive camera path.

    objects is kept sorted so patterns compare and hash canonically.
    span is the overall time interval covered by the group on this path,
    or None when it has not been computed.
    """

    objects: tuple[ObjectId, ...]
    path: tuple[CameraId, ...]
    span: tuple[int, int] | None = field(default=None, compare=False)

    @classmethod
    def of(
        cls,
        objects: Iterable[ObjectId],
        path: Iterable[CameraId],
        span: tuple[int, int] | None = None,
    ) -> "CoMovementPattern":
        objs = tuple(sorted(set(objects)))
        p = tuple(path)
        if not objs:
            raise ValueError("pattern needs at least one object")
        if not p:
            raise ValueError("pattern needs at least one camera")
        return cls(objs, p, span)

    def key(self) -> tuple[tuple[CameraId, ...], tuple[ObjectId, ...]]:
        """Canonical sort key: path first, then member list."""
        return (self.path, self.objects)


def validate_path(
    object_id: ObjectId,
    visits: Iterable[Visit | tuple[CameraId, int, int]],
) -> TravelPath:
    """Build a TravelPath, sorting visits by entrance and checking invariants.

    Accepts Visit instances or (camera, entrance, exit) tuples. Raises
    PathValidationError naming the offending visit index (position after
    sorting) when an interval is inverted or two visits overlap.
    """
    vs = [v if isinstance(v, Visit) else Visit(v[0], int(v[1]), int(v[2])) for v in visits]
    if not vs:
        raise PathValidationError(f"object {object_id!r}: empty visit list")
    vs.sort(key=lambda v: (v.entrance, v.exit, v.camera))
    for i, v in enumerate(vs):
        if v.exit < v.entrance:
            raise PathValidationError(
                f"object {object_id!r}: visit {i} at {v.camera!r} has exit "
                f"{v.exit} before entrance {v.entrance}"
            )
        if i + 1 < len(vs) and vs[i + 1].entrance <= v.exit:
            raise PathValidationError(
                f"object {object_id!r}: visit {i + 1} at {vs[i + 1].camera!r} "
                f"starts at {vs[i + 1].entrance}, not after previous exit {v.exit}"
            )
    return TravelPath(object_id, tuple(vs))


def occurrences(inner: Sequence[CameraId], outer: Sequence[CameraId]) -> list[int]:
    """Start positions where inner occurs as a contiguous run inside outer."""
    if not inner:
        raise ValueError("inner sequence must be non-empty")
    n, w = len(outer), len(inner)
    target = tuple(inner)
    return [i for i in range(n - w + 1) if tuple(outer[i : i + w]) == target]


def is_subpath(inner: Sequence[CameraId], outer: TravelPath | Sequence[CameraId]) -> list[int]:
    """Occurrence positions of a camera sequence within a travel path.

    Empty result means inner never appears as a consecutive camera run.
    """
    cams = outer.cameras() if isinstance(outer, TravelPath) else outer
    return occurrences(inner, cams)


def eps_reachable(v1: Visit, v2: Visit, epsilon: int) -> bool:
    """Whether two visits at the same camera start within epsilon ticks."""
    if v1.camera != v2.camera:
        raise ValueError(f"visits are at different cameras: {v1.camera!r} vs {v2.camera!r}")
    return abs(v1.entrance - v2.entrance) <= epsilon


def dominates(cp1: CoMovementPattern, cp2: CoMovementPattern) -> bool:
    """Whether cp1 absorbs cp2: superset members over a superpath.

    Reflexive by definition; strictness is the caller's concern. The path
    containment is contiguous (camera-for-camera run), not a scattered
    subsequence.
    """
    if not set(cp2.objects).issubset(cp1.objects):
        return False
    return bool(occurrences(cp2.path, cp1.path))


@dataclass(frozen=True)
class CameraNetwork:
    """Data-driven camera adjacency: edge u -> v iff some object moves u to v."""

    vertices: tuple[CameraId, ...]
    out_edges: Mapping[CameraId, tuple[CameraId, ...]]
    in_edges: Mapping[CameraId, tuple[CameraId, ...]]

    def out_neighbors(self, camera: CameraId) -> tuple[CameraId, ...]:
        return self.out_edges.get(camera, ())

    def in_neighbors(self, camera: CameraId) -> tuple[CameraId, ...]:
        return self.in_edges.get(camera, ())


def build_camera_network(paths: Iterable[TravelPath]) -> CameraNetwork:
    """Collect vertices and consecutive-visit edges from travel paths.

    Output is independent of path ordering: vertex and adjacency lists are
    sorted lexicographically.
    """
    vertices: set[CameraId] = set()
    outs: dict[CameraId, set[CameraId]] = {}
    ins: dict[CameraId, set[CameraId]] = {}
    for path in paths:
        cams = path.cameras()
        vertices.update(cams)
        for a, b in zip(cams, cams[1:]):
            outs.setdefault(a, set()).add(b)
            ins.setdefault(b, set()).add(a)
    return CameraNetwork(
        vertices=tuple(sorted(vertices)),
        out_edges={c: tuple(sorted(outs[c])) for c in sorted(outs)},
        in_edges={c: tuple(sorted(ins[c])) for c in sorted(ins)},
    )


def virtualize_overlapping_cameras(
    paths: Iterable[TravelPath | tuple[ObjectId, Sequence[Visit]]],
    groups: Mapping[str, Iterable[CameraId]],
    known_cameras: Iterable[CameraId] | None = None,
) -> list[TravelPath]:
    """Replace visits to grouped cameras with visits to one virtual camera.

    Cameras whose fields of view overlap are declared as a named group; the
    group name becomes the virtual camera id. Within a group, maximal runs
    of temporally overlapping visits by one object collapse into a single
    visit spanning their union. Visits to the same group that do not
    overlap in time stay separate (each renamed to the group id).

    Input paths may violate the no-overlap invariant across grouped
    cameras, which is exactly what this pass repairs. Raw (object_id,
    visits) pairs are accepted for that reason. The output is validated.
    """
    group_of: dict[CameraId, str] = {}
    for gid, cams in groups.items():
        for c in cams:
            if c in group_of:
                raise ValueError(f"camera {c!r} listed in two overlap groups")
            group_of[c] = gid

    raw: list[tuple[ObjectId, list[Visit]]] = []
    seen_cameras: set[CameraId] = set()
    for p in paths:
        oid, vs = (p.object_id, list(p.visits)) if isinstance(p, TravelPath) else (p[0], list(p[1]))
        raw.append((oid, vs))
        seen_cameras.update(v.camera for v in vs)

    universe = set(known_cameras) if known_cameras is not None else seen_cameras
    unknown = set(group_of) - universe
    if unknown:
        raise ValueError(f"overlap groups reference unknown cameras: {sorted(unknown)}")
    for gid in groups:
        if gid in universe and gid not in group_of:
            raise ValueError(f"group id {gid!r} collides with an existing camera id")

    out: list[TravelPath] = []
    for oid, vs in raw:
        out.append(validate_path(oid, merge_grouped_visits(vs, group_of)))
    return out


def merge_grouped_visits(
    visits: Iterable[Visit], group_of: Mapping[CameraId, str]
) -> list[Visit]:
    """Apply the overlap-group merge rule to one object's raw visits.

    Visits to grouped cameras are renamed to their group id; maximal runs
    of temporally overlapping visits within one group collapse into a
    single visit spanning their union. Everything else passes through.
    The result is entrance-sorted but not otherwise validated.
    """
    merged: list[Visit] = []
    for v in sorted(visits, key=lambda v: (v.entrance, v.exit)):
        gid = group_of.get(v.camera)
        if gid is None:
            merged.append(v)
            continue
        prev = merged[-1] if merged else None
        if prev is not None and prev.camera == gid and v.entrance <= prev.exit:
            merged[-1] = Visit(gid, prev.entrance, max(prev.exit, v.exit))
        else:
            merged.append(Visit(gid, v.entrance, v.exit))
    return merged


def pattern_span(
    objects: Iterable[ObjectId],
    path: Sequence[CameraId],
    paths_by_object: Mapping[ObjectId, TravelPath],
) -> tuple[int, int]:
    """Overall time interval of a group on a path.

    Start is the earliest entrance at the first path camera and end the
    latest exit at the last path camera, taken over every occurrence of the
    path inside each member's travel path. Independent of which miner
    produced the pattern.
    """
    w = len(path)
    start: int | None = None
    end: int | None = None
    for oid in objects:
        tp = paths_by_object[oid]
        for pos in is_subpath(path, tp):
            s = tp.visits[pos].entrance
            e = tp.visits[pos + w - 1].exit
            start = s if start is None else min(start, s)
            end = e if end is None else max(end, e)
    if start is None or end is None:
        raise ValueError("path does not occur in any member's travel path")
    return (start, end)


def attach_spans(
    patterns: Iterable[CoMovementPattern],
    paths: Iterable[TravelPath],
) -> list[CoMovementPattern]:
    """Return patterns sorted canonically with spans filled in."""
    by_object = {p.object_id: p for p in paths}
    out = [
        CoMovementPattern(cp.objects, cp.path, pattern_span(cp.objects, cp.path, by_object))
        for cp in patterns
    ]
    out.sort(key=CoMovementPattern.key)
    return out
