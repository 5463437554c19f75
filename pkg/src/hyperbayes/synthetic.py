"""Seeded synthetic instances: planted hypergraphs and small random graphs."""

from __future__ import annotations

import random
from itertools import combinations

from .hypergraph import Hypergraph, PairwiseGraph


def planted_hypergraph(num_vertices: int, num_edges: int, sizes: tuple[int, int] = (2, 5),
                       seed: int = 0, restarts: int = 50) -> Hypergraph:
    """Plant ``num_edges`` hyperedges with sizes uniform in ``sizes``.

    Placement leans towards disjointness.  Each hyperedge is grown vertex by
    vertex, preferring low-degree vertices (weight 1/(1+degree)^2) among those
    that share no covered pair and no common neighbour with the vertices
    already chosen, so the maximal cliques of the projection are exactly the
    planted hyperedges.  A hyperedge that runs out of such vertices is regrown
    up to ``restarts`` times; after that the blocked vertices are allowed.
    """
    lo, hi = sizes
    if lo < 2 or hi < lo or hi > num_vertices:
        raise ValueError(f"bad size range {sizes} for {num_vertices} vertices")
    rng = random.Random(seed)
    degree = [0] * num_vertices
    adj: list[set[int]] = [set() for _ in range(num_vertices)]
    edges: list[tuple[int, ...]] = []
    for _ in range(num_edges):
        k = rng.randint(lo, hi)
        for attempt in range(restarts + 1):
            chosen = _grow(rng, k, num_vertices, degree, adj, strict=attempt < restarts)
            if chosen is not None:
                break
        e = tuple(sorted(chosen))
        edges.append(e)
        for i, j in combinations(e, 2):
            adj[i].add(j)
            adj[j].add(i)
        for v in e:
            degree[v] += 1
    return Hypergraph(num_vertices, edges)


def _grow(rng, k, n, degree, adj, strict):
    chosen: list[int] = []
    blocked: set[int] = set()
    while len(chosen) < k:
        v = _draw_vertex(rng, n, degree, blocked, chosen, strict)
        if v is None:
            return None
        chosen.append(v)
        # neighbours of v, and anything adjacent to them, would close a
        # triangle or reuse a pair
        blocked |= adj[v]
        for w in adj[v]:
            blocked |= adj[w]
    return chosen


def _draw_vertex(rng, n, degree, blocked, chosen, strict, tries=64):
    # rejection sampling against weight 1/(1+degree)^2; exact scan as fallback
    for _ in range(tries):
        v = int(rng.random() * n)
        if v in blocked or v in chosen:
            continue
        if rng.random() < 1.0 / (1 + degree[v]) ** 2:
            return v
    pool = [v for v in range(n) if v not in blocked and v not in chosen]
    if not pool:
        if strict:
            return None
        pool = [v for v in range(n) if v not in chosen]
    return rng.choices(pool, [1.0 / (1 + degree[u]) ** 2 for u in pool])[0]


def random_connected_graph(rng: random.Random, max_vertices: int = 6, edge_prob: float = 0.5,
                           min_vertices: int = 2) -> PairwiseGraph:
    """G(n, edge_prob) with n uniform in [min_vertices, max_vertices], redrawn until connected."""
    while True:
        n = rng.randint(min_vertices, max_vertices)
        pairs = [(i, j) for i, j in combinations(range(n), 2) if rng.random() < edge_prob]
        if _connected(n, pairs):
            return PairwiseGraph(n, pairs)


def _connected(n: int, pairs) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in pairs:
        parent[find(i)] = find(j)
    return len({find(v) for v in range(n)}) == 1
