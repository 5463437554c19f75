"""Likelihood and prior terms of the hypergraph posterior, all in natural-log space.

Probability zero is represented as ``-inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .hypergraph import Hypergraph, PairwiseGraph, edge_cover_count, pair_cover_counts

NEG_INF = -math.inf


@dataclass(frozen=True)
class ModelParams:
    """Emission probability ``p``, sparsity weight ``beta``, multiplicity
    penalty ``gamma``, hyperedge size limit ``max_edge_size`` and an optional
    set of observed vertices (``None`` means every vertex is observed)."""

    p: float = 0.99
    beta: float = 1.0
    gamma: float = 5.0
    max_edge_size: int = 6
    observed_vertices: frozenset[int] | None = None

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.beta < 0 or self.gamma < 0:
            raise ValueError("beta and gamma must be non-negative")
        if self.max_edge_size < 2:
            raise ValueError("max_edge_size must be at least 2")
        if self.observed_vertices is not None and not isinstance(self.observed_vertices, frozenset):
            object.__setattr__(self, "observed_vertices", frozenset(self.observed_vertices))

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.observed_vertices is not None:
            d["observed_vertices"] = sorted(self.observed_vertices)
        return d


def log_edge_term(count: int, p: float) -> float:
    """log P(A_ij = 1) = log(1 - (1-p)^count)."""
    if count <= 0:
        return NEG_INF
    return math.log(-math.expm1(count * math.log1p(-p)))


def log_nonedge_term(count: int, p: float) -> float:
    """log P(A_ij = 0) = count * log(1-p)."""
    return count * math.log1p(-p)


def edge_prob(h: Hypergraph, i: int, j: int, params: ModelParams) -> float:
    """Noisy-OR probability that pair ``(i, j)`` is observed."""
    k = edge_cover_count(h, i, j)
    if k == 0:
        return 0.0
    return -math.expm1(k * math.log1p(-params.p))


def _check_sizes(g: PairwiseGraph, h: Hypergraph) -> None:
    if g.num_vertices != h.num_vertices:
        raise ValueError(
            f"vertex-count mismatch: graph has {g.num_vertices}, hypergraph {h.num_vertices}"
        )


def _noisy_or_sum(g: PairwiseGraph, counts: dict, pairs, p: float) -> float:
    total = 0.0
    for pair in pairs:
        k = counts.get(pair, 0)
        if pair in g.edges:
            if k == 0:
                return NEG_INF
            total += log_edge_term(k, p)
        elif k:
            total += log_nonedge_term(k, p)
    return total


def log_likelihood_full(g: PairwiseGraph, h: Hypergraph, params: ModelParams) -> float:
    """Noisy-OR log-likelihood of the whole observed graph.

    Pairs that no hyperedge covers contribute nothing unless they are
    observed edges, in which case the result is ``-inf``.
    """
    _check_sizes(g, h)
    counts = pair_cover_counts(h)
    for pair in g.edges:
        if pair not in counts:
            return NEG_INF
    return _noisy_or_sum(g, counts, counts.keys(), params.p)


def log_likelihood_bernoulli(g: PairwiseGraph, h: Hypergraph, params: ModelParams) -> float:
    """Plain Bernoulli(p) log-likelihood over the pairs covered by ``h``.

    Not used by the sampler; kept for comparison with the noisy-OR form.
    """
    _check_sizes(g, h)
    log_p, log_q = math.log(params.p), math.log1p(-params.p)
    total = 0.0
    for pair in pair_cover_counts(h):
        total += log_p if pair in g.edges else log_q
    return total


def log_likelihood_partial(g_obs: PairwiseGraph, h: Hypergraph, params: ModelParams) -> float:
    """Noisy-OR log-likelihood restricted to pairs inside ``params.observed_vertices``."""
    _check_sizes(g_obs, h)
    omega = params.observed_vertices
    if omega is None:
        return log_likelihood_full(g_obs, h, params)
    for i, j in g_obs.edges:
        if i not in omega or j not in omega:
            raise ValueError(f"observed edge ({i}, {j}) lies outside the observed vertex set")
    counts = pair_cover_counts(h)
    for pair in g_obs.edges:
        if pair not in counts:
            return NEG_INF
    in_scope = [pr for pr in counts if pr[0] in omega and pr[1] in omega]
    return _noisy_or_sum(g_obs, counts, in_scope, params.p)


def log_prior(h: Hypergraph, params: ModelParams) -> float:
    """-beta*|E| - gamma*sum(delta(e)-1), or ``-inf`` if any hyperedge exceeds the size limit."""
    total = 0
    duplicates = 0
    for e, m in h.edges.items():
        if len(e) > params.max_edge_size:
            return NEG_INF
        total += m
        duplicates += m - 1
    return -params.beta * total - params.gamma * duplicates


def log_posterior(g: PairwiseGraph, h: Hypergraph, params: ModelParams) -> float:
    """Unnormalised log-posterior (likelihood + prior)."""
    prior = log_prior(h, params)
    if prior == NEG_INF:
        _check_sizes(g, h)
        return NEG_INF
    lik = log_likelihood_full(g, h, params)
    if lik == NEG_INF:
        return NEG_INF
    return lik + prior
