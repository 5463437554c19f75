"""Hypergraph and pairwise-graph containers, clique projection, maximal
clique enumeration and the canonical ``.hg`` / ``.pg`` text formats.

Vertices are dense integers ``0..n-1``.  A hyperedge is stored as a sorted
tuple of at least two distinct vertices; identical hyperedges are collapsed
into one entry carrying an explicit multiplicity.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

Edge = tuple[int, ...]
Pair = tuple[int, int]

DEFAULT_CLIQUE_CAP = 10**6


class ParseError(ValueError):
    """Malformed ``.hg`` / ``.pg`` input."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CliqueLimitError(RuntimeError):
    pass


def _as_edge(vertices: Iterable[int], num_vertices: int) -> Edge:
    edge = tuple(sorted(int(v) for v in vertices))
    if len(edge) < 2:
        raise ValueError(f"hyperedge {edge} has fewer than 2 vertices")
    for a, b in zip(edge, edge[1:]):
        if a == b:
            raise ValueError(f"hyperedge {edge} repeats vertex {a}")
    if edge[0] < 0 or edge[-1] >= num_vertices:
        raise ValueError(f"hyperedge {edge} out of range for {num_vertices} vertices")
    return edge


class Hypergraph:
    """Vertex count plus a multiset of hyperedges.

    ``edges`` may be an iterable of vertex collections (repeats accumulate
    multiplicity) or a mapping ``edge -> multiplicity``.
    """

    __slots__ = ("num_vertices", "_edges", "_hash")

    def __init__(self, num_vertices: int, edges: Iterable | Mapping = ()):
        if num_vertices < 0:
            raise ValueError("num_vertices must be non-negative")
        self.num_vertices = int(num_vertices)
        counts: dict[Edge, int] = {}
        items = edges.items() if isinstance(edges, Mapping) else ((e, 1) for e in edges)
        for e, m in items:
            m = int(m)
            if m < 0:
                raise ValueError(f"negative multiplicity for {e}")
            if m == 0:
                continue
            key = _as_edge(e, self.num_vertices)
            counts[key] = counts.get(key, 0) + m
        self._edges = dict(sorted(counts.items()))
        self._hash = None

    @property
    def edges(self) -> Mapping[Edge, int]:
        return MappingProxyType(self._edges)

    @property
    def num_edges(self) -> int:
        """|E|, counting multiplicities."""
        return sum(self._edges.values())

    @property
    def num_distinct(self) -> int:
        return len(self._edges)

    def multiplicity(self, edge: Iterable[int]) -> int:
        return self._edges.get(tuple(sorted(edge)), 0)

    def key(self) -> tuple[tuple[Edge, int], ...]:
        """Hashable canonical form: sorted ``(edge, multiplicity)`` pairs."""
        return tuple(self._edges.items())

    def __iter__(self) -> Iterator[Edge]:
        return iter(self._edges)

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, edge) -> bool:
        return tuple(sorted(edge)) in self._edges

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.num_vertices == other.num_vertices and self._edges == other._edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num_vertices, self.key()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            "{" + ",".join(map(str, e)) + "}" + (f"*{m}" if m > 1 else "")
            for e, m in self._edges.items()
        )
        return f"Hypergraph(n={self.num_vertices}, [{body}])"

    def with_edge(self, edge: Iterable[int], count: int = 1) -> "Hypergraph":
        edges = dict(self._edges)
        key = _as_edge(edge, self.num_vertices)
        edges[key] = edges.get(key, 0) + count
        return Hypergraph(self.num_vertices, edges)

    def without_edge(self, edge: Iterable[int], count: int = 1) -> "Hypergraph":
        key = tuple(sorted(edge))
        if self._edges.get(key, 0) < count:
            raise KeyError(f"{key} not present {count} time(s)")
        edges = dict(self._edges)
        edges[key] -= count
        return Hypergraph(self.num_vertices, edges)

    def restrict(self, max_size: int) -> "Hypergraph":
        """Keep only hyperedges with at most ``max_size`` vertices."""
        return Hypergraph(
            self.num_vertices, {e: m for e, m in self._edges.items() if len(e) <= max_size}
        )


class PairwiseGraph:
    """Undirected simple graph; each edge stored once as ``(i, j)`` with ``i < j``."""

    __slots__ = ("num_vertices", "_edges", "_adj")

    def __init__(self, num_vertices: int, edges: Iterable[Iterable[int]] = ()):
        if num_vertices < 0:
            raise ValueError("num_vertices must be non-negative")
        self.num_vertices = int(num_vertices)
        pairs = set()
        for e in edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if i > j:
                i, j = j, i
            if i < 0 or j >= self.num_vertices:
                raise ValueError(f"edge ({i}, {j}) out of range for {num_vertices} vertices")
            pairs.add((i, j))
        self._edges = frozenset(pairs)
        self._adj = None

    @property
    def edges(self) -> frozenset[Pair]:
        return self._edges

    def sorted_edges(self) -> list[Pair]:
        return sorted(self._edges)

    def has_edge(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        return (i, j) in self._edges

    def adjacency(self) -> dict[int, set[int]]:
        """Neighbour sets for every vertex (isolated vertices map to empty sets)."""
        if self._adj is None:
            adj: dict[int, set[int]] = {v: set() for v in range(self.num_vertices)}
            for i, j in self._edges:
                adj[i].add(j)
                adj[j].add(i)
            self._adj = adj
        return self._adj

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, pair) -> bool:
        i, j = pair
        return self.has_edge(i, j)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairwiseGraph):
            return NotImplemented
        return self.num_vertices == other.num_vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.num_vertices, self._edges))

    def __repr__(self) -> str:
        return f"PairwiseGraph(n={self.num_vertices}, m={len(self._edges)})"


def project(h: Hypergraph) -> PairwiseGraph:
    """Clique expansion: ``(i, j)`` is an edge iff some hyperedge holds both."""
    pairs = set()
    for e in h:
        pairs.update(combinations(e, 2))
    return PairwiseGraph(h.num_vertices, pairs)


def _check_pair(num_vertices: int, i: int, j: int) -> None:
    if i == j:
        raise ValueError(f"pair ({i}, {j}) is not a pair of distinct vertices")
    if not (0 <= i < num_vertices and 0 <= j < num_vertices):
        raise ValueError(f"pair ({i}, {j}) out of range for {num_vertices} vertices")


def edge_cover_count(h: Hypergraph, i: int, j: int) -> int:
    """Number of hyperedges (with multiplicity) containing both ``i`` and ``j``."""
    _check_pair(h.num_vertices, i, j)
    return sum(m for e, m in h.edges.items() if i in e and j in e)


def pair_cover_counts(h: Hypergraph) -> dict[Pair, int]:
    """Cover count for every pair with at least one covering hyperedge."""
    counts: dict[Pair, int] = defaultdict(int)
    for e, m in h.edges.items():
        for pair in combinations(e, 2):
            counts[pair] += m
    return dict(counts)


def maximal_cliques(g: PairwiseGraph, cap: int = DEFAULT_CLIQUE_CAP) -> list[Edge]:
    """All maximal cliques with at least two vertices, lexicographically sorted.

    Bron-Kerbosch with Tomita pivoting, run as an explicit stack so deep
    cliques cannot hit the recursion limit.  Raises ``CliqueLimitError``
    once more than ``cap`` cliques have been found.
    """
    adj = g.adjacency()
    found: list[Edge] = []
    stack = [((), {v for v in adj if adj[v]}, set())]
    while stack:
        r, p, x = stack.pop()
        if not p:
            if not x and len(r) >= 2:
                found.append(tuple(sorted(r)))
                if len(found) > cap:
                    raise CliqueLimitError(f"more than {cap} maximal cliques")
            continue
        pivot = max(p | x, key=lambda u: (len(p & adj[u]), -u))
        for v in sorted(p - adj[pivot], reverse=True):
            nv = adj[v]
            stack.append((r + (v,), p & nv, x & nv))
            p = p - {v}
            x = x | {v}
    found.sort()
    return found


# -- text formats ------------------------------------------------------------

def _edge_line(edge: Edge, mult: int = 1) -> str:
    line = " ".join(map(str, edge))
    return f"{line}*{mult}" if mult > 1 else line


def serialize(obj: Hypergraph | PairwiseGraph) -> bytes:
    """Canonical UTF-8 text: ``#vertices N`` header, then one edge per line."""
    lines = [f"#vertices {obj.num_vertices}"]
    if isinstance(obj, Hypergraph):
        lines.extend(_edge_line(e, m) for e, m in obj.edges.items())
    elif isinstance(obj, PairwiseGraph):
        lines.extend(f"{i} {j}" for i, j in obj.sorted_edges())
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def hyperedge_line(edge: Edge, mult: int = 1) -> bytes:
    """The exact ``.hg`` line (with terminator) for one hyperedge."""
    return (_edge_line(edge, mult) + "\n").encode("utf-8")


def _parse(data: bytes | str, pairwise: bool):
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    num_vertices = None
    entries: list[tuple[int, Edge, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if num_vertices is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "#vertices":
                raise ParseError("expected header '#vertices N'", lineno)
            try:
                num_vertices = int(parts[1])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[1]!r}", lineno) from None
            if num_vertices < 0:
                raise ParseError("negative vertex count", lineno)
            continue
        body, star, mult_txt = line.partition("*")
        mult = 1
        if star:
            if pairwise:
                raise ParseError("multiplicity suffix not allowed in pairwise graphs", lineno)
            try:
                mult = int(mult_txt)
            except ValueError:
                raise ParseError(f"bad multiplicity {mult_txt!r}", lineno) from None
            if mult < 1:
                raise ParseError("multiplicity must be >= 1", lineno)
        try:
            ids = [int(tok) for tok in body.split()]
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", lineno) from None
        if pairwise and len(ids) != 2:
            raise ParseError(f"pairwise line needs exactly 2 ids, got {len(ids)}", lineno)
        try:
            edge = _as_edge(ids, num_vertices)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        entries.append((lineno, edge, mult))
    if num_vertices is None:
        raise ParseError("missing '#vertices N' header", 1)
    return num_vertices, entries


def deserialize(data: bytes | str, kind: str = "hg") -> Hypergraph | PairwiseGraph:
    """Parse ``.hg`` (``kind="hg"``) or ``.pg`` (``kind="pg"``) text."""
    if kind not in ("hg", "pg"):
        raise ValueError(f"unknown kind {kind!r}")
    n, entries = _parse(data, pairwise=kind == "pg")
    if kind == "pg":
        return PairwiseGraph(n, (e for _, e, _ in entries))
    edges: dict[Edge, int] = {}
    for _, e, m in entries:
        edges[e] = edges.get(e, 0) + m
    return Hypergraph(n, edges)


def read(path, kind: str | None = None) -> Hypergraph | PairwiseGraph:
    """Read a file, inferring ``kind`` from the ``.pg`` / ``.hg`` suffix."""
    path = str(path)
    if kind is None:
        kind = "pg" if path.endswith(".pg") else "hg"
    with open(path, "rb") as fh:
        return deserialize(fh.read(), kind)


def write(obj: Hypergraph | PairwiseGraph, path, comment: str | None = None) -> None:
    data = serialize(obj)
    if comment:
        header, _, rest = data.partition(b"\n")
        data = header + b"\n" + f"% {comment}\n".encode("utf-8") + rest
    with open(path, "wb") as fh:
        fh.write(data)
