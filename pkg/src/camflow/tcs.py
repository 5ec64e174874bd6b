"""Token-sequence index and frequent consecutive-run enumeration.

Objects encoded as token segments (meta-cluster ids, or camera ids for
the unfiltered variant) are indexed in one generalized suffix tree. A
token run is frequent when at least m distinct objects contain it as a
contiguous substring of some segment. Mining enumerates the right-maximal
frequent runs: every frequent run of length >= k is a prefix of some
emitted candidate, so verifying candidates and their windows covers the
whole search space without enumerating it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .clustering import TokenSequence
from .model import CameraId, ObjectId, TravelPath
from .suffixtree import GeneralizedSuffixTree, Node


@dataclass(frozen=True)
class CandidateSequence:
    """A right-maximal frequent token run and its distinct-object support."""

    tokens: tuple[int, ...]
    support: int


class TcsTree:
    """Suffix tree over all objects' token segments.

    Sources are dense object indexes; node support therefore counts
    distinct objects, not occurrences.
    """

    def __init__(self, sequences: Iterable[TokenSequence]):
        seqs = list(sequences)
        self.objects: tuple[ObjectId, ...] = tuple(s.object_id for s in seqs)
        parts: list[tuple[int, Sequence[int]]] = []
        for idx, seq in enumerate(seqs):
            for segment in seq.segments:
                if segment:
                    parts.append((idx, segment))
        self.tree = GeneralizedSuffixTree(parts)
        text = self.tree.text
        n = len(text)
        # next_sentinel[i]: first position >= i holding a sentinel token.
        nxt = [n] * (n + 1)
        for i in range(n - 1, -1, -1):
            nxt[i] = i if text[i] < 0 else nxt[i + 1]
        self._next_sentinel = nxt

    @property
    def node_count(self) -> int:
        return self.tree.node_count

    def contains(self, tokens: Sequence[int]) -> bool:
        return self.tree.contains(tokens)

    def support_of(self, tokens: Sequence[int]) -> int:
        return self.tree.support_of(tokens)

    def supporting_objects(self, tokens: Sequence[int]) -> tuple[ObjectId, ...]:
        starts = self.tree.leaf_starts(tokens)
        idxs = {self.tree.owner[s] for s in starts}
        return tuple(sorted(self.objects[i] for i in idxs))

    def _clean_edge_len(self, node: Node) -> int:
        """Edge length up to (not including) the first sentinel on it."""
        end = node.edge_end(len(self.tree.text))
        return min(end, self._next_sentinel[node.start]) - node.start


def build_tcs_tree(sequences: Iterable[TokenSequence]) -> TcsTree:
    return TcsTree(sequences)


def frequent_sequences(index: TcsTree, m: int, k: int) -> list[CandidateSequence]:
    """Enumerate right-maximal frequent runs of length >= k.

    A run is emitted when extending it by any further token drops the
    distinct-object support below m. Sentinel tokens terminate segments
    and never extend a run. Results are sorted lexicographically by token
    ids so the output order is reproducible.
    """
    tree = index.tree
    text = tree.text
    out: list[CandidateSequence] = []
    if not text:
        return out
    buf: list[int] = []

    def frequent_children(node: Node) -> list[Node]:
        # traversal order is immaterial: the final sort canonicalizes
        return [
            child
            for tok, child in node.children.items()
            if tok >= 0 and child.support >= m
        ]

    # Frames: (node, tokens appended to buf, list of frequent children,
    # next child position). Iterative DFS; paths can be deep.
    root = tree.root
    stack: list[list] = [[root, 0, frequent_children(root), 0]]
    while stack:
        frame = stack[-1]
        node, added, kids, pos = frame
        if pos < len(kids):
            frame[3] += 1
            child = kids[pos]
            clean = index._clean_edge_len(child)
            buf.extend(text[child.start : child.start + clean])
            stack.append([child, clean, frequent_children(child), 0])
            continue
        if node is not root and not kids and len(buf) >= k:
            out.append(CandidateSequence(tuple(buf), node.support))
        if added:
            del buf[-added:]
        stack.pop()
    out.sort(key=lambda c: c.tokens)
    return out


def substring_maximal(
    candidates: Sequence[CandidateSequence],
) -> list[CandidateSequence]:
    """Drop candidates whose runs sit inside another candidate's run.

    Verifying a run also verifies all of its contiguous sub-runs, so
    contained candidates are pure duplicate work. A right-maximal run can
    only appear inside another one as a suffix (an inner occurrence would
    admit a frequent extension), so reversing the tokens turns containment
    into a prefix relation and the reversed-sorted neighbour decides it.
    """
    revd = sorted(candidates, key=lambda c: c.tokens[::-1])
    out: list[CandidateSequence] = []
    for i, cand in enumerate(revd):
        if i + 1 < len(revd):
            r, nxt = cand.tokens[::-1], revd[i + 1].tokens[::-1]
            if len(nxt) > len(r) and nxt[: len(r)] == r:
                continue
        out.append(cand)
    out.sort(key=lambda c: c.tokens)
    return out


def count_frequent_substrings(index: TcsTree, m: int, min_len: int = 1) -> int:
    """Count distinct sentinel-free runs with support >= m and length >= min_len.

    Walks the tree once: a node with sufficient support contributes one
    run per token of its incoming edge (up to the first sentinel), since
    support is constant along an edge.
    """
    tree = index.tree
    total = 0
    stack: list[tuple[Node, int]] = [(tree.root, 0)]
    while stack:
        node, depth = stack.pop()
        for tok, child in node.children.items():
            if tok < 0 or child.support < m:
                continue
            clean = index._clean_edge_len(child)
            lo = max(depth + 1, min_len)
            hi = depth + clean
            if hi >= lo:
                total += hi - lo + 1
            stack.append((child, depth + clean))
    return total


def encode_camera_tokens(
    paths: Iterable[TravelPath],
) -> tuple[list[TokenSequence], dict[int, CameraId]]:
    """Encode travel paths directly over camera-id tokens, no filtering.

    Every object becomes a single segment, so the index holds all camera
    runs regardless of whether anyone travels together. Used by the
    sequence-mining baseline and the unfiltered ablation variant.
    """
    ps = list(paths)
    cameras = sorted({v.camera for p in ps for v in p.visits})
    token_of = {c: i for i, c in enumerate(cameras)}
    seqs = [
        TokenSequence(p.object_id, (tuple(token_of[v.camera] for v in p.visits),))
        for p in ps
    ]
    return seqs, {i: c for c, i in token_of.items()}
