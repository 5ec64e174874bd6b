"""Dataset files, pattern files, and the three dataset sources.

Dataset CSV: header ``object_id,camera_id,entrance,exit``, one visit per
row, UTF-8, LF, base-10 integer ticks, rows sorted by object then
entrance. Pattern files are JSON Lines, one pattern per line with sorted
member lists, ordered by path then members. Generators cover synthetic
grid traffic, a clique-hardness reduction, and conversion of GPS tracks
against a camera placement file.
"""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, TextIO

from .model import (
    CameraId,
    CoMovementPattern,
    DataFormatError,
    ObjectId,
    PathValidationError,
    TravelPath,
    Visit,
    merge_grouped_visits,
    validate_path,
)

DATASET_HEADER = ["object_id", "camera_id", "entrance", "exit"]


@dataclass(frozen=True)
class Dataset:
    """Validated travel paths plus free-form provenance metadata."""

    paths: tuple[TravelPath, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def by_object(self) -> dict[ObjectId, TravelPath]:
        return {p.object_id: p for p in self.paths}

    def visit_count(self) -> int:
        return sum(len(p) for p in self.paths)

    def cameras(self) -> tuple[CameraId, ...]:
        return tuple(sorted({v.camera for p in self.paths for v in p.visits}))


# -- dataset CSV -------------------------------------------------------


def write_dataset(dataset: Dataset, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(DATASET_HEADER)
    for path in sorted(dataset.paths, key=lambda p: p.object_id):
        for v in path.visits:
            writer.writerow([path.object_id, v.camera, v.entrance, v.exit])


def read_dataset(fh: TextIO, source: str = "<stream>") -> Dataset:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError(f"{source}: empty file, expected header row") from None
    if header != DATASET_HEADER:
        raise DataFormatError(
            f"{source}: bad header {header!r}, expected {DATASET_HEADER!r}"
        )
    visits: dict[ObjectId, list[Visit]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise DataFormatError(f"{source}:{lineno}: expected 4 fields, got {len(row)}")
        oid, cam, s, e = row
        try:
            entrance, exit_ = int(s, 10), int(e, 10)
        except ValueError:
            raise DataFormatError(
                f"{source}:{lineno}: timestamps must be base-10 integers, got {s!r}/{e!r}"
            ) from None
        visits.setdefault(oid, []).append(Visit(cam, entrance, exit_))
    paths = []
    for oid in sorted(visits):
        try:
            paths.append(validate_path(oid, visits[oid]))
        except PathValidationError as exc:
            raise DataFormatError(f"{source}: {exc}") from None
    ds = Dataset(tuple(paths))
    ds.metadata.update(
        objects=len(paths),
        cameras=len(ds.cameras()),
        visits=ds.visit_count(),
        source=source,
    )
    return ds


def load_dataset(path: str) -> Dataset:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return read_dataset(fh, source=path)


def save_dataset(dataset: Dataset, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_dataset(dataset, fh)


# -- pattern files -----------------------------------------------------


def write_patterns(patterns: Iterable[CoMovementPattern], fh: TextIO) -> None:
    for p in sorted(patterns, key=CoMovementPattern.key):
        rec = {
            "objects": list(p.objects),
            "path": list(p.path),
            "span": list(p.span) if p.span is not None else None,
        }
        fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def read_patterns(fh: TextIO, source: str = "<stream>") -> list[CoMovementPattern]:
    out: list[CoMovementPattern] = []
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{source}:{lineno}: bad JSON: {exc}") from None
        try:
            objects = [str(o) for o in rec["objects"]]
            path = [str(c) for c in rec["path"]]
            span = rec.get("span")
            span_t = (int(span[0]), int(span[1])) if span is not None else None
        except (KeyError, TypeError, ValueError, IndexError):
            raise DataFormatError(
                f"{source}:{lineno}: pattern records need objects, path and span"
            ) from None
        out.append(CoMovementPattern.of(objects, path, span_t))
    return out


def load_patterns(path: str) -> list[CoMovementPattern]:
    with open(path, "r", encoding="utf-8") as fh:
        return read_patterns(fh, source=path)


def save_patterns(patterns: Iterable[CoMovementPattern], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_patterns(patterns, fh)


# -- synthetic grid traffic --------------------------------------------


@dataclass(frozen=True)
class SyntheticConfig:
    """Knobs of the synthetic generator.

    Objects walk a grid of cameras. A group_rate fraction of them spawn
    in convoys of 2 to max_group objects sharing one route, each member
    shifted by a fixed entrance offset of at most eps_scale ticks, so
    convoys survive mining at epsilon >= eps_scale. A platoon_rate
    fraction also share routes, but each member's entrance additionally
    jitters within a band of platoon_spread ticks, moving by at most
    platoon_drift per camera hop (None lets it jump anywhere in the
    band). With a spread beyond the mining epsilon they bunch up at
    every camera without staying coherent as one group, like commuters
    on the same road. The rest walk alone.
    """

    cameras: int = 100
    objects: int = 50
    avg_path_len: float = 10.0
    group_rate: float = 0.3
    eps_scale: int = 10
    max_group: int = 4
    dwell: tuple[int, int] = (1, 4)
    travel: tuple[int, int] = (5, 30)
    horizon: int = 10_000
    platoon_rate: float = 0.0
    platoon_spread: int = 0
    platoon_drift: int | None = None

    def __post_init__(self) -> None:
        if self.objects < 1:
            raise ValueError("object count must be >= 1")
        if self.cameras < 1:
            raise ValueError("camera count must be >= 1")
        if self.avg_path_len < 1:
            raise ValueError("average path length must be >= 1")
        if not 0.0 <= self.group_rate <= 1.0:
            raise ValueError("group rate must be within [0, 1]")
        if not 0.0 <= self.platoon_rate <= 1.0:
            raise ValueError("platoon rate must be within [0, 1]")
        if self.group_rate + self.platoon_rate > 1.0:
            raise ValueError("group and platoon rates must sum to <= 1")
        if self.eps_scale < 0:
            raise ValueError("eps scale must be >= 0")
        if self.platoon_spread < 0:
            raise ValueError("platoon spread must be >= 0")
        if self.platoon_drift is not None and self.platoon_drift < 0:
            raise ValueError("platoon drift must be >= 0")


def _grid_neighbors(cameras: int) -> dict[int, list[int]]:
    side = max(1, math.isqrt(cameras - 1) + 1) if cameras > 1 else 1
    nbrs: dict[int, list[int]] = {}
    for c in range(cameras):
        r, q = divmod(c, side)
        opts = []
        for rr, qq in ((r - 1, q), (r + 1, q), (r, q - 1), (r, q + 1)):
            n = rr * side + qq
            if 0 <= rr and 0 <= qq < side and 0 <= n < cameras:
                opts.append(n)
        nbrs[c] = opts if opts else [c]
    return nbrs


def gen_synthetic(config: SyntheticConfig, seed: int) -> Dataset:
    """Deterministic synthetic dataset; same config and seed, same bytes."""
    rng = random.Random(seed)
    nbrs = _grid_neighbors(config.cameras)
    width = len(str(config.cameras - 1))
    owidth = len(str(config.objects - 1))

    def cam_name(c: int) -> str:
        return f"c{c:0{width}d}"

    def walk() -> list[int]:
        length = max(1, round(rng.normalvariate(config.avg_path_len, config.avg_path_len / 4)))
        pos = rng.randrange(config.cameras)
        route = [pos]
        while len(route) < length:
            pos = rng.choice(nbrs[pos])
            route.append(pos)
        return route

    def schedule(route: Sequence[int]) -> list[Visit]:
        t = rng.randrange(config.horizon)
        out = []
        for c in route:
            dwell = rng.randint(*config.dwell)
            out.append(Visit(cam_name(c), t, t + dwell))
            t += dwell + rng.randint(*config.travel)
        return out

    def jittered(base: Sequence[Visit], offset: int) -> list[Visit]:
        # jitter is redrawn freely per camera, or walks the band with
        # bounded steps when a drift cap is set; entrances are shoved
        # forward where a draw would overlap the previous visit
        spread = config.platoon_spread
        drift = config.platoon_drift
        free = drift is None or drift >= spread
        delta = rng.randint(0, spread)
        out: list[Visit] = []
        prev_exit: int | None = None
        for v in base:
            start = v.entrance + offset + delta
            if prev_exit is not None and start <= prev_exit:
                start = prev_exit + 1
            out.append(Visit(v.camera, start, start + v.exit - v.entrance))
            prev_exit = out[-1].exit
            if free:
                delta = rng.randint(0, spread)
            else:
                delta = min(spread, max(0, delta + rng.randint(-drift, drift)))
        return out

    paths: list[TravelPath] = []
    i = 0
    while i < config.objects:
        remaining = config.objects - i
        if remaining >= 2 and (u := rng.random()) < config.group_rate + config.platoon_rate:
            size = min(rng.randint(2, config.max_group), remaining)
            base = schedule(walk())
            loose = u >= config.group_rate
            for j in range(size):
                offset = rng.randint(0, config.eps_scale)
                if loose:
                    shifted = jittered(base, offset)
                else:
                    shifted = [Visit(v.camera, v.entrance + offset, v.exit + offset) for v in base]
                paths.append(validate_path(f"o{i + j:0{owidth}d}", shifted))
            i += size
        else:
            paths.append(validate_path(f"o{i:0{owidth}d}", schedule(walk())))
            i += 1

    ds = Dataset(tuple(paths))
    ds.metadata.update(
        generator="synthetic",
        seed=seed,
        objects=config.objects,
        cameras=config.cameras,
        avg_path_len=config.avg_path_len,
        group_rate=config.group_rate,
        platoon_rate=config.platoon_rate,
        eps_scale=config.eps_scale,
    )
    return ds


# -- clique-hardness reduction -----------------------------------------


@dataclass(frozen=True)
class ReductionInstance:
    """Dataset encoding a graph so cliques become co-movement groups.

    All objects traverse the same eta cameras. At camera j, object j is
    placed epsilon away from objects adjacent to vertex j and 2 epsilon
    away from the rest, so a group is pairwise reachable everywhere iff
    its vertices form a clique. Cameras beyond the vertex count place
    everyone together and constrain nothing.
    """

    dataset: Dataset
    vertex_of_object: dict[ObjectId, int]
    epsilon: int
    k: int
    eta: int


def gen_clique_reduction(
    n_vertices: int,
    edges: Iterable[tuple[int, int]],
    epsilon: int,
    k: int,
) -> ReductionInstance:
    """Encode an undirected graph (vertices 0..n-1) as a mining instance."""
    if n_vertices < 1:
        raise ValueError("graph needs at least one vertex")
    if epsilon < 1:
        raise ValueError("the reduction needs epsilon >= 1 to separate gaps")
    adj: set[tuple[int, int]] = set()
    for a, b in edges:
        if not (0 <= a < n_vertices and 0 <= b < n_vertices):
            raise ValueError(f"edge ({a}, {b}) references a missing vertex")
        if a != b:
            adj.add((min(a, b), max(a, b)))
    eta = max(n_vertices, k)
    step = 2 * epsilon + 1
    owidth = len(str(n_vertices - 1))
    cwidth = len(str(eta - 1))
    paths = []
    vertex_of: dict[ObjectId, int] = {}
    for i in range(n_vertices):
        oid = f"o{i:0{owidth}d}"
        vertex_of[oid] = i
        visits = []
        for j in range(eta):
            if j >= n_vertices or (i != j and (min(i, j), max(i, j)) not in adj):
                t = step * (j + 1) - epsilon
            elif i == j:
                t = step * (j + 1) + epsilon
            else:
                t = step * (j + 1)
            visits.append(Visit(f"c{j:0{cwidth}d}", t, t))
        paths.append(validate_path(oid, visits))
    ds = Dataset(tuple(paths))
    ds.metadata.update(
        generator="clique_reduction",
        vertices=n_vertices,
        edges=len(adj),
        epsilon=epsilon,
        k=k,
        eta=eta,
    )
    return ReductionInstance(ds, vertex_of, epsilon, k, eta)


# -- GPS conversion ----------------------------------------------------


@dataclass(frozen=True)
class CameraSpec:
    camera_id: CameraId
    x: float
    y: float
    radius: float
    group_id: str | None = None


def read_cameras(fh: TextIO, source: str = "<stream>") -> list[CameraSpec]:
    """Parse a placement CSV: camera_id,x,y,radius[,group_id]."""
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError(f"{source}: empty camera file") from None
    if header[:4] != ["camera_id", "x", "y", "radius"]:
        raise DataFormatError(f"{source}: bad camera header {header!r}")
    has_group = len(header) >= 5 and header[4] == "group_id"
    out: list[CameraSpec] = []
    seen: set[str] = set()
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            cid = row[0]
            x, y, r = float(row[1]), float(row[2]), float(row[3])
        except (IndexError, ValueError):
            raise DataFormatError(f"{source}:{lineno}: bad camera row {row!r}") from None
        if r <= 0:
            raise DataFormatError(f"{source}:{lineno}: radius must be positive")
        if cid in seen:
            raise DataFormatError(f"{source}:{lineno}: duplicate camera id {cid!r}")
        seen.add(cid)
        gid = row[4].strip() if has_group and len(row) > 4 and row[4].strip() else None
        out.append(CameraSpec(cid, x, y, r, gid))
    return out


def read_trajectories(
    fh: TextIO, source: str = "<stream>"
) -> dict[ObjectId, list[tuple[int, float, float]]]:
    """Parse a track CSV: object_id,ts,x,y with per-object increasing ts."""
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError(f"{source}: empty trajectory file") from None
    if header != ["object_id", "ts", "x", "y"]:
        raise DataFormatError(f"{source}: bad trajectory header {header!r}")
    tracks: dict[ObjectId, list[tuple[int, float, float]]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            oid, ts, x, y = row[0], int(row[1], 10), float(row[2]), float(row[3])
        except (IndexError, ValueError):
            raise DataFormatError(f"{source}:{lineno}: bad trajectory row {row!r}") from None
        pts = tracks.setdefault(oid, [])
        if pts and ts <= pts[-1][0]:
            raise DataFormatError(
                f"{source}:{lineno}: timestamps for {oid!r} must strictly increase"
            )
        pts.append((ts, x, y))
    return tracks


def _disk_intervals(
    points: Sequence[tuple[int, float, float]], cam: CameraSpec
) -> list[tuple[float, float]]:
    """Time intervals during which the interpolated track is inside the disk."""
    raw: list[tuple[float, float]] = []
    r2 = cam.radius * cam.radius
    for (t1, x1, y1), (t2, x2, y2) in zip(points, points[1:]):
        dx, dy = x2 - x1, y2 - y1
        fx, fy = x1 - cam.x, y1 - cam.y
        a = dx * dx + dy * dy
        b = 2.0 * (fx * dx + fy * dy)
        c = fx * fx + fy * fy - r2
        if a == 0.0:
            if c <= 0.0:
                raw.append((float(t1), float(t2)))
            continue
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            continue
        sq = math.sqrt(disc)
        u1 = (-b - sq) / (2.0 * a)
        u2 = (-b + sq) / (2.0 * a)
        lo, hi = max(u1, 0.0), min(u2, 1.0)
        if lo > hi:
            continue
        t_lo = float(t1) if lo == 0.0 else t1 + lo * (t2 - t1)
        t_hi = float(t2) if hi == 1.0 else t1 + hi * (t2 - t1)
        raw.append((t_lo, t_hi))
    # A dwell spanning several samples shows up as touching intervals.
    merged: list[tuple[float, float]] = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1] + 1e-9:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def convert_gps(
    tracks: Mapping[ObjectId, Sequence[tuple[int, float, float]]],
    cameras: Sequence[CameraSpec],
) -> Dataset:
    """Derive a camera-visit dataset from point tracks and disk cameras.

    Tracks are linearly interpolated between samples; a visit starts and
    ends where the track crosses the disk boundary. When two ungrouped
    disks both contain the track, the instant goes to the nearer center
    (ties broken by camera id), so ungrouped visits never overlap.
    Grouped cameras keep their raw containment and are then collapsed by
    the overlap-group merge rule; the group id becomes the camera id.
    Re-entering the same camera with no other sighting in between extends
    the previous visit instead of opening a new one. Crossing times are
    rounded to integer ticks at the very end, nudging entrances forward
    when rounding makes neighbours collide.
    """
    grouped = [c for c in cameras if c.group_id is not None]
    ungrouped = [c for c in cameras if c.group_id is None]
    group_of: dict[CameraId, str] = {c.camera_id: c.group_id for c in grouped}
    group_ids = set(group_of.values())
    for c in cameras:
        if c.group_id is None and c.camera_id in group_ids:
            raise DataFormatError(
                f"group id {c.camera_id!r} collides with an ungrouped camera id"
            )

    paths: list[TravelPath] = []
    for oid in sorted(tracks):
        points = tracks[oid]
        if len(points) == 0:
            continue
        fvisits: list[tuple[CameraId, float, float]] = []

        for cam in grouped:
            for lo, hi in _disk_intervals(points, cam):
                fvisits.append((cam.camera_id, lo, hi))

        intervals = {
            cam.camera_id: _disk_intervals(points, cam) for cam in ungrouped
        }
        cuts = sorted({t for iv in intervals.values() for pair in iv for t in pair})
        spec_of = {c.camera_id: c for c in ungrouped}
        assigned: list[tuple[CameraId, float, float]] = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid_t = (lo + hi) / 2.0
            covering = [
                cid
                for cid, ivs in intervals.items()
                if any(a <= mid_t <= b for a, b in ivs)
            ]
            if not covering:
                continue
            px, py = _position_at(points, mid_t)
            best = min(
                covering,
                key=lambda cid: (
                    (px - spec_of[cid].x) ** 2 + (py - spec_of[cid].y) ** 2,
                    cid,
                ),
            )
            if assigned and assigned[-1][0] == best and lo <= assigned[-1][2] + 1e-9:
                assigned[-1] = (best, assigned[-1][1], hi)
            else:
                assigned.append((best, lo, hi))
        fvisits.extend(assigned)

        fvisits.sort(key=lambda v: (v[1], v[2]))
        merged = merge_grouped_visits(
            [Visit(cid, lo, hi) for cid, lo, hi in fvisits], group_of  # type: ignore[arg-type]
        )
        # Re-entries with no other camera in between extend the open visit.
        dwell: list[Visit] = []
        for v in merged:
            if dwell and dwell[-1].camera == v.camera and v.camera not in group_ids:
                dwell[-1] = Visit(v.camera, dwell[-1].entrance, max(dwell[-1].exit, v.exit))
            else:
                dwell.append(v)
        ticks: list[Visit] = []
        prev_exit: int | None = None
        for v in dwell:
            s, e = round(v.entrance), round(v.exit)
            if prev_exit is not None and s <= prev_exit:
                s = prev_exit + 1
            e = max(e, s)
            ticks.append(Visit(v.camera, s, e))
            prev_exit = e
        if ticks:
            paths.append(validate_path(oid, ticks))

    ds = Dataset(tuple(paths))
    ds.metadata.update(
        generator="gps_conversion",
        tracks=len(tracks),
        cameras=len(cameras),
        objects=len(paths),
    )
    return ds


def _position_at(
    points: Sequence[tuple[int, float, float]], t: float
) -> tuple[float, float]:
    if t <= points[0][0]:
        return points[0][1], points[0][2]
    for (t1, x1, y1), (t2, x2, y2) in zip(points, points[1:]):
        if t1 <= t <= t2:
            if t2 == t1:
                return x1, y1
            u = (t - t1) / (t2 - t1)
            return x1 + u * (x2 - x1), y1 + u * (y2 - y1)
    return points[-1][1], points[-1][2]
