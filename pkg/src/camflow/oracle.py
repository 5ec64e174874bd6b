"""Exhaustive reference miner for desk-scale ground truth.

Enumerates every contiguous camera subsequence of length >= k, builds the
compatibility graph of its occurrence runs (two runs of different objects
are compatible when their entrance gap stays within epsilon at every
position), and reads groups off the maximal cliques. Deliberately shares
no code with the production miners beyond the data model, so agreement
between the two routes is meaningful evidence.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

from .model import (
    CameraId,
    CamflowError,
    CoMovementPattern,
    MiningParams,
    ObjectId,
    TravelPath,
)


class OracleSizeError(CamflowError):
    """Instance exceeds the size guard of the exhaustive miner."""


def max_cliques(neighbors: Mapping[Hashable, Iterable[Hashable]]) -> list[frozenset]:
    """All maximal cliques, via Bron-Kerbosch with pivoting.

    neighbors maps each vertex to its adjacent vertices; the relation is
    symmetrized defensively. Isolated vertices yield singleton cliques.
    """
    adj: dict[Hashable, set] = {v: set() for v in neighbors}
    for v, ns in neighbors.items():
        for u in ns:
            if u == v:
                continue
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
    if not adj:
        return []
    cliques: list[frozenset] = []

    def expand(r: set, p: set, x: set) -> None:
        if not p and not x:
            cliques.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda v: (len(adj[v] & p), repr(v)))
        for v in sorted(p - adj[pivot], key=repr):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(adj), set())
    return cliques


def _runs_of(path: TravelPath, sub: Sequence[CameraId]) -> list[int]:
    cams = path.cameras()
    w = len(sub)
    return [
        i
        for i in range(len(cams) - w + 1)
        if tuple(cams[i : i + w]) == tuple(sub)
    ]


def mine_bruteforce(
    paths: Sequence[TravelPath],
    params: MiningParams,
    max_objects: int = 14,
    max_cameras: int = 12,
    max_path_len: int = 10,
) -> list[CoMovementPattern]:
    """Exhaustively mine all non-dominated patterns of a small instance.

    Raises OracleSizeError above the guard; the guard bounds can be
    raised explicitly when the caller knows what they are asking for.
    """
    cameras = {v.camera for p in paths for v in p.visits}
    longest = max((len(p.visits) for p in paths), default=0)
    if len(paths) > max_objects or len(cameras) > max_cameras or longest > max_path_len:
        raise OracleSizeError(
            f"instance too large for exhaustive mining: {len(paths)} objects, "
            f"{len(cameras)} cameras, longest path {longest} "
            f"(guard: {max_objects}/{max_cameras}/{max_path_len})"
        )

    subpaths: set[tuple[CameraId, ...]] = set()
    for p in paths:
        cams = p.cameras()
        for w in range(params.k, len(cams) + 1):
            for i in range(len(cams) - w + 1):
                subpaths.add(tuple(cams[i : i + w]))

    found: set[tuple[tuple[ObjectId, ...], tuple[CameraId, ...]]] = set()
    for sub in sorted(subpaths):
        w = len(sub)
        runs: list[tuple[ObjectId, int, tuple[int, ...]]] = []
        for p in paths:
            for start in _runs_of(p, sub):
                entrances = tuple(p.visits[start + j].entrance for j in range(w))
                runs.append((p.object_id, start, entrances))
        if len({o for o, _, _ in runs}) < params.m:
            continue
        nbrs: dict[int, set[int]] = {i: set() for i in range(len(runs))}
        for i in range(len(runs)):
            oi, _, ti = runs[i]
            for j in range(i + 1, len(runs)):
                oj, _, tj = runs[j]
                if oi == oj:
                    continue
                if all(abs(a - b) <= params.epsilon for a, b in zip(ti, tj)):
                    nbrs[i].add(j)
                    nbrs[j].add(i)
        for clique in max_cliques(nbrs):
            objs = tuple(sorted({runs[i][0] for i in clique}))
            if len(objs) >= params.m:
                found.add((objs, sub))

    # Quadratic dominance sweep, straight from the definition.
    items = sorted(found)
    kept: list[CoMovementPattern] = []
    for objs, sub in items:
        objset = set(objs)
        dominated = False
        for objs2, sub2 in items:
            if (objs2, sub2) == (objs, sub):
                continue
            if objset.issubset(objs2) and _contains_run(sub2, sub):
                dominated = True
                break
        if not dominated:
            kept.append(CoMovementPattern.of(objs, sub))
    kept.sort(key=CoMovementPattern.key)
    return kept


def _contains_run(outer: tuple[CameraId, ...], inner: tuple[CameraId, ...]) -> bool:
    w = len(inner)
    return any(outer[i : i + w] == inner for i in range(len(outer) - w + 1))
