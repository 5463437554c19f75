"""Exhaustive ground truth on tiny graphs.

Candidate hyperedges are found by testing every vertex subset for being a
clique, independently of the Bron-Kerbosch code used by the sampler.  Any
hyperedge holding a non-adjacent pair would project a phantom edge, so the
restriction to cliques loses no valid state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .hypergraph import Edge, Hypergraph, PairwiseGraph, serialize
from .model import NEG_INF, ModelParams, log_edge_term, log_posterior


class SearchSpaceError(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationBounds:
    max_vertices: int = 6
    max_multiplicity: int = 2
    max_edge_size: int | None = None
    max_space: int = 10**8


def candidate_edges(g: PairwiseGraph, max_edge_size: int) -> list[Edge]:
    """Every clique of ``g`` with 2..max_edge_size vertices, by brute force."""
    out = []
    for k in range(2, min(max_edge_size, g.num_vertices) + 1):
        for subset in combinations(range(g.num_vertices), k):
            if all(g.has_edge(i, j) for i, j in combinations(subset, 2)):
                out.append(subset)
    return out


def _candidates(g: PairwiseGraph, bounds: EnumerationBounds, params: ModelParams | None):
    if g.num_vertices > bounds.max_vertices:
        raise SearchSpaceError(
            f"{g.num_vertices} vertices exceeds the enumeration bound of {bounds.max_vertices}"
        )
    limit = bounds.max_edge_size
    if params is not None:
        limit = params.max_edge_size if limit is None else min(limit, params.max_edge_size)
    if limit is None:
        limit = max(g.num_vertices, 2)
    cands = candidate_edges(g, limit)
    space = (bounds.max_multiplicity + 1) ** len(cands)
    if space > bounds.max_space:
        raise SearchSpaceError(
            f"search space {bounds.max_multiplicity + 1}^{len(cands)} exceeds {bounds.max_space}"
        )
    return cands


def _remaining_cover(g: PairwiseGraph, cands: list[Edge]) -> list[dict]:
    """rem[d][pair] = number of candidates at index >= d covering pair."""
    rem = [dict.fromkeys(g.edges, 0) for _ in range(len(cands) + 1)]
    for d in range(len(cands) - 1, -1, -1):
        rem[d].update(rem[d + 1])
        for pair in combinations(cands[d], 2):
            rem[d][pair] += 1
    return rem


def enumerate_valid(g: PairwiseGraph, bounds: EnumerationBounds = EnumerationBounds(),
                    params: ModelParams | None = None) -> list[Hypergraph]:
    """All hypergraphs over candidate cliques (multiplicity up to the bound)
    whose projection equals ``g``."""
    cands = _candidates(g, bounds, params)
    rem = _remaining_cover(g, cands)
    cover = dict.fromkeys(g.edges, 0)
    chosen: dict[Edge, int] = {}
    out: list[Hypergraph] = []

    def dfs(d: int) -> None:
        if any(cover[pr] == 0 and rem[d][pr] == 0 for pr in cover):
            return
        if d == len(cands):
            out.append(Hypergraph(g.num_vertices, chosen))
            return
        e = cands[d]
        pairs = list(combinations(e, 2))
        for m in range(bounds.max_multiplicity + 1):
            if m:
                chosen[e] = m
                for pr in pairs:
                    cover[pr] += 1
            dfs(d + 1)
        for pr in pairs:
            cover[pr] -= bounds.max_multiplicity
        chosen.pop(e, None)

    dfs(0)
    return out


def exact_map(g: PairwiseGraph, params: ModelParams,
              bounds: EnumerationBounds = EnumerationBounds()) -> tuple[Hypergraph, float]:
    """Exact argmax of the log-posterior over the valid state space.

    Depth-first branch and bound: the prior only decreases as hyperedges are
    added, and every pair's noisy-OR term is bounded by its value under the
    maximum remaining coverage, so pruned branches cannot contain the MAP.
    Ties are broken by the smallest serialized form.
    """
    cands = _candidates(g, bounds, params)
    rem = _remaining_cover(g, cands)
    cover = dict.fromkeys(g.edges, 0)
    chosen: dict[Edge, int] = {}
    mmax = bounds.max_multiplicity
    p = params.p
    best = {"lp": NEG_INF, "states": []}

    def bound(d: int, prior: float) -> float:
        total = prior
        for pr, k in cover.items():
            reach = k + mmax * rem[d][pr]
            if reach == 0:
                return NEG_INF
            total += log_edge_term(reach, p)
        return total

    def dfs(d: int, prior: float) -> None:
        ub = bound(d, prior)
        if ub == NEG_INF or ub < best["lp"] - 1e-9:
            return
        if d == len(cands):
            h = Hypergraph(g.num_vertices, chosen)
            lp = log_posterior(g, h, params)
            if lp > best["lp"] + 1e-12:
                best["lp"], best["states"] = lp, [h]
            elif lp >= best["lp"] - 1e-12:
                best["states"].append(h)
            return
        e = cands[d]
        pairs = list(combinations(e, 2))
        step = prior
        for m in range(mmax + 1):
            if m:
                chosen[e] = m
                for pr in pairs:
                    cover[pr] += 1
                step -= params.beta + (params.gamma if m > 1 else 0.0)
            dfs(d + 1, step)
        for pr in pairs:
            cover[pr] -= mmax
        chosen.pop(e, None)

    if not g.edges:
        h = Hypergraph(g.num_vertices)
        return h, log_posterior(g, h, params)
    dfs(0, 0.0)
    if not best["states"]:
        raise SearchSpaceError("no valid hypergraph within the bounds")
    top = max(log_posterior(g, h, params) for h in best["states"])
    tied = [h for h in best["states"] if log_posterior(g, h, params) >= top - 1e-12]
    winner = min(tied, key=serialize)
    return winner, log_posterior(g, winner, params)


def exact_posterior_table(g: PairwiseGraph, params: ModelParams,
                          bounds: EnumerationBounds = EnumerationBounds()) -> dict[Hypergraph, float]:
    """Normalised posterior over every valid hypergraph in the bounded space."""
    states = enumerate_valid(g, bounds, params)
    lps = [log_posterior(g, h, params) for h in states]
    top = max(lps)
    if top == NEG_INF:
        raise SearchSpaceError("every enumerated state has zero posterior")
    log_z = top + math.log(math.fsum(math.exp(lp - top) for lp in lps))
    return {h: math.exp(lp - log_z) for h, lp in zip(states, lps)}
