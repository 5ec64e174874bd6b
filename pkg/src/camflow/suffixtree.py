"""Generalized suffix tree over integer token sequences.

Sequences are concatenated with unique negative sentinel tokens so each
input segment ends at its own terminator and no repeated substring can
cross a segment boundary. Construction is Ukkonen's online algorithm,
linear in the total token count. After construction every node knows how
many distinct sources (objects) contain its substring, computed by one
bottom-up pass with small-to-large set merging.

All traversals are iterative; input sequences can be long enough that
recursion would overflow.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class Node:
    """Tree node. The incoming edge is text[start:end); leaves use end=None
    and implicitly extend to the end of the text."""

    __slots__ = ("start", "end", "children", "slink", "support", "depth", "suffix_start", "bag")

    def __init__(self, start: int, end: int | None):
        self.start = start
        self.end = end
        self.children: dict[int, Node] = {}
        self.slink: Node | None = None
        self.support = 0
        self.depth = 0
        self.suffix_start = -1  # leaves only: where the suffix begins
        self.bag: set[int] | None = None  # scratch for the support pass

    def edge_end(self, text_len: int) -> int:
        return text_len if self.end is None else self.end


class GeneralizedSuffixTree:
    """Suffix tree of several token segments, each owned by a source id.

    segments: iterable of (source, tokens). Tokens must be non-negative
    ints; sentinels are assigned negative values internally, one per
    segment, and never participate in substring matches.
    """

    def __init__(self, segments: Iterable[tuple[int, Sequence[int]]]):
        text: list[int] = []
        owner: list[int] = []
        sources: set[int] = set()
        sentinel = -1
        for source, tokens in segments:
            for t in tokens:
                if t < 0:
                    raise ValueError("tokens must be non-negative")
                text.append(t)
                owner.append(source)
            text.append(sentinel)
            owner.append(source)
            sentinel -= 1
            sources.add(source)
        self.text: list[int] = text
        self.owner: list[int] = owner
        self.n_sources = len(sources)
        self.root = Node(-1, -1)
        self._node_count = 1
        if text:
            self._build()
            self._annotate()

    # -- construction -------------------------------------------------

    def _build(self) -> None:
        text = self.text
        root = self.root
        active_node = root
        active_edge = 0  # index into text of the first token on the active edge
        active_len = 0
        remainder = 0
        for i, ch in enumerate(text):
            remainder += 1
            pending: Node | None = None
            while remainder > 0:
                if active_len == 0:
                    active_edge = i
                nxt = active_node.children.get(text[active_edge])
                if nxt is None:
                    leaf = Node(i, None)
                    self._node_count += 1
                    active_node.children[text[active_edge]] = leaf
                    if pending is not None:
                        pending.slink = active_node
                        pending = None
                else:
                    edge_len = nxt.edge_end(i + 1) - nxt.start
                    if active_len >= edge_len:
                        active_node = nxt
                        active_edge += edge_len
                        active_len -= edge_len
                        continue
                    if text[nxt.start + active_len] == ch:
                        active_len += 1
                        if pending is not None:
                            pending.slink = active_node
                        break
                    split = Node(nxt.start, nxt.start + active_len)
                    self._node_count += 1
                    active_node.children[text[active_edge]] = split
                    leaf = Node(i, None)
                    self._node_count += 1
                    split.children[ch] = leaf
                    nxt.start += active_len
                    split.children[text[nxt.start]] = nxt
                    if pending is not None:
                        pending.slink = split
                    pending = split
                remainder -= 1
                if active_node is root and active_len > 0:
                    active_len -= 1
                    active_edge = i - remainder + 1
                elif active_node is not root:
                    active_node = active_node.slink if active_node.slink is not None else root

    # -- annotations ---------------------------------------------------

    def _annotate(self) -> None:
        """Fill depth, leaf suffix starts and distinct-source supports."""
        n = len(self.text)
        order: list[Node] = []
        stack: list[Node] = [self.root]
        while stack:
            node = stack.pop()
            order.append(node)
            for child in node.children.values():
                child.depth = node.depth + (child.edge_end(n) - child.start)
                stack.append(child)
        # Reverse pre-order visits children before parents; owner sets are
        # merged smaller-into-larger and dropped once the parent took them
        owner = self.owner
        for node in reversed(order):
            if not node.children:
                node.suffix_start = n - node.depth
                node.bag = {owner[node.suffix_start] if n else 0}
            else:
                acc: set[int] = set()
                for child in node.children.values():
                    s = child.bag
                    child.bag = None
                    if len(s) > len(acc):
                        acc, s = s, acc
                    acc |= s
                node.bag = acc
            node.support = len(node.bag)
        self.root.bag = None

    # -- queries -------------------------------------------------------

    @property
    def node_count(self) -> int:
        return self._node_count

    def locate(self, tokens: Sequence[int]) -> tuple[Node, int] | None:
        """Walk tokens from the root; return (node, consumed-on-edge) or None.

        The locus is the node at or below which the walk ends;
        consumed-on-edge counts tokens matched on its incoming edge.
        """
        if not tokens:
            return (self.root, 0)
        n = len(self.text)
        node = self.root
        i = 0
        while i < len(tokens):
            child = node.children.get(tokens[i])
            if child is None:
                return None
            end = child.edge_end(n)
            j = child.start
            while j < end and i < len(tokens):
                if self.text[j] != tokens[i]:
                    return None
                i += 1
                j += 1
            if i == len(tokens):
                return (child, j - child.start)
            node = child
        return (node, 0)

    def contains(self, tokens: Sequence[int]) -> bool:
        """Whether tokens occur as a substring of some input segment."""
        return self.locate(tokens) is not None

    def support_of(self, tokens: Sequence[int]) -> int:
        """Distinct sources whose segments contain tokens as a substring."""
        loc = self.locate(tokens)
        if loc is None:
            return 0
        return loc[0].support

    def leaf_starts(self, tokens: Sequence[int]) -> list[int]:
        """Text positions where occurrences of tokens begin."""
        loc = self.locate(tokens)
        if loc is None:
            return []
        node = loc[0]
        out: list[int] = []
        stack = [node]
        while stack:
            cur = stack.pop()
            if not cur.children:
                out.append(cur.suffix_start)
            else:
                stack.extend(cur.children.values())
        return sorted(out)
