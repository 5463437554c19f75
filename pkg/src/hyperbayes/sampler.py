"""Metropolis-Hastings random walk over hypergraphs whose clique projection
equals the observed graph.

Every move picks a candidate clique ``c`` uniformly from the maximal cliques
of the observed graph, then with probability 1/2 either

* adds a sub-hyperedge of ``c`` (size uniform in ``[2, min(|c|, L)]``, then a
  uniform subset of that size; an existing hyperedge gains multiplicity), or
* removes one copy of a sub-hyperedge of ``c`` chosen uniformly among the
  distinct sub-hyperedges currently present (a null move if there are none).

The proposal ratio is computed exactly by summing over every candidate that
could have produced the move, in both directions.

Candidates are cliques of the graph, so an ADD never projects a pair outside
it.  The only way to leave the exact-cover set is a removal that uncovers an
observed pair; it is rejected outright and counted in
``constraint_rejections``.  With ``hard_constraint=False`` the same move is
rejected because its likelihood is zero, so both settings drive the same
chain and differ only in that counter.

Randomness comes from ``random.Random`` (MT19937) seeded with the configured
integer and consumed only through ``random()``, so traces are reproducible
across platforms and Python versions.
"""

from __future__ import annotations

import csv
import gc
import io
import logging
import math
import os
import random
import time
from array import array
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .hypergraph import (
    DEFAULT_CLIQUE_CAP,
    Edge,
    Hypergraph,
    PairwiseGraph,
    maximal_cliques,
    project,
)
from .model import NEG_INF, ModelParams, log_edge_term, log_posterior

log = logging.getLogger(__name__)

TRACE_COLUMNS = ("t", "alpha", "entropy", "accepted", "num_hyperedges", "log_posterior")

# Incremental log-posteriors must beat the incumbent by this much to become
# the new MAP, so floating drift never reorders ties.
MAP_TIE_TOL = 1e-12


# largest subset table built eagerly by HypergraphChain
PRECOMPUTE_BUDGET = 300_000


class ProjectionViolation(AssertionError):
    """An accepted state does not project onto the observed graph."""


class ProposalMove(NamedTuple):
    kind: str  # "add", "remove" or "null"
    target: Edge
    sub: Edge | None


def _debug_default() -> bool:
    return os.environ.get("HYPERBAYES_DEBUG", "") not in ("", "0")


@dataclass(frozen=True)
class SamplerConfig:
    iterations: int = 20_000
    seed: int = 0
    params: ModelParams = field(default_factory=ModelParams)
    burn_in: int | None = None  # None -> iterations // 10
    record_trace: bool = True
    trace_stride: int = 1
    hard_constraint: bool = True
    debug: bool = field(default_factory=_debug_default)
    count_visits: bool = False
    sample_stride: int = 0
    time_stride: int = 256
    clique_cap: int = DEFAULT_CLIQUE_CAP

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", self.iterations // 10)
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("burn_in must satisfy 0 <= burn_in < iterations")
        if self.trace_stride < 1 or self.time_stride < 1 or self.sample_stride < 0:
            raise ValueError("strides must be positive")

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "seed": self.seed,
            "burn_in": self.burn_in,
            "trace_stride": self.trace_stride,
            "hard_constraint": self.hard_constraint,
            "rng": "MT19937 (random.Random, random() draws only)",
            "params": self.params.to_dict(),
        }


@dataclass
class SamplerTrace:
    """Per-iteration diagnostics plus the MAP state of one chain."""

    t: array = field(default_factory=lambda: array("q"))
    alpha: array = field(default_factory=lambda: array("d"))
    accepted: array = field(default_factory=lambda: array("b"))
    num_hyperedges: array = field(default_factory=lambda: array("q"))
    log_posterior: array = field(default_factory=lambda: array("d"))
    # (t, elapsed ns, |E|) checkpoints for runtime curves
    timing: list = field(default_factory=list)
    initial: Hypergraph | None = None
    initial_log_posterior: float = NEG_INF
    final: Hypergraph | None = None
    map_hypergraph: Hypergraph | None = None
    map_log_posterior: float = NEG_INF
    map_iteration: int = 0
    iterations: int = 0
    accepted_count: int = 0
    null_moves: int = 0
    constraint_rejections: int = 0
    projection_checks: int = 0
    visit_counts: Counter | None = None
    samples: list = field(default_factory=list)

    @property
    def entropy(self) -> np.ndarray:
        return binary_entropy(np.frombuffer(self.alpha, dtype=np.float64))

    @property
    def acceptance_rate(self) -> float:
        return self.accepted_count / self.iterations if self.iterations else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for row in zip(self.t, self.alpha, self.entropy.tolist(), self.accepted,
                       self.num_hyperedges, self.log_posterior):
            t, a, h, acc, n, lp = row
            writer.writerow((t, repr(a), repr(h), int(acc), n, repr(lp)))
        return buf.getvalue()


def binary_entropy(alpha):
    """Entropy in bits of a Bernoulli(alpha) trial, with 0*log 0 = 0."""
    a = np.clip(np.asarray(alpha, dtype=np.float64), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(a > 0, a * np.log2(a), 0.0) + np.where(a < 1, (1 - a) * np.log2(1 - a), 0.0))
    h = np.clip(h, 0.0, 1.0) + 0.0  # +0.0 folds -0.0 into 0.0
    return float(h) if h.ndim == 0 else h


def _split_clique(clique: Edge, size: int) -> list[Edge]:
    """Cover the pairs of ``clique`` greedily with ``size``-subsets."""
    uncovered = set(combinations(clique, 2))
    parts = []
    while uncovered:
        chosen = list(min(uncovered))
        while len(chosen) < size:
            best, best_gain = None, 0
            for v in clique:
                if v in chosen:
                    continue
                gain = sum(1 for w in chosen if ((v, w) if v < w else (w, v)) in uncovered)
                if gain > best_gain:
                    best, best_gain = v, gain
            if best is None:
                # nothing left to gain; pad with the smallest unused vertex
                best = next(v for v in clique if v not in chosen)
            chosen.append(best)
        part = tuple(sorted(chosen))
        parts.append(part)
        uncovered.difference_update(combinations(part, 2))
    return parts


def initialize(g: PairwiseGraph, max_edge_size: int, cliques: list[Edge] | None = None,
               clique_cap: int = DEFAULT_CLIQUE_CAP) -> Hypergraph:
    """Starting state: the maximal cliques of ``g``, oversized ones split into
    ``max_edge_size``-subsets that cover their pairs.  Projects onto ``g``."""
    if cliques is None:
        cliques = maximal_cliques(g, cap=clique_cap)
    edges: Counter = Counter()
    for c in cliques:
        if len(c) <= max_edge_size:
            edges[c] += 1
        else:
            edges.update(_split_clique(c, max_edge_size))
    return Hypergraph(g.num_vertices, edges)


class HypergraphChain:
    """Mutable chain state with incremental posterior bookkeeping.

    Owned by a single caller; ``run`` drives it.  Scoring a move on a
    hyperedge of size k touches only its k(k-1)/2 pairs and the candidates
    containing it.
    """

    def __init__(self, g: PairwiseGraph, params: ModelParams, state: Hypergraph | None = None,
                 cliques: list[Edge] | None = None, clique_cap: int = DEFAULT_CLIQUE_CAP):
        self.g = g
        self.params = params
        self.L = params.max_edge_size
        self.pool = cliques if cliques is not None else maximal_cliques(g, cap=clique_cap)
        if state is None:
            state = initialize(g, self.L, self.pool)
        if state.num_vertices != g.num_vertices:
            raise ValueError("state and graph disagree on the vertex count")
        self._vpool: dict[int, set[int]] = {}
        for idx, c in enumerate(self.pool):
            for v in c:
                self._vpool.setdefault(v, set()).add(idx)
        self._info: dict[Edge, tuple] = {}
        self._terms = [log_edge_term(k, params.p) for k in range(64)]
        self.edges: dict[Edge, int] = {}
        # pair coverage counts, indexed by a dense pair id
        self._pair_id = {pair: i for i, pair in enumerate(sorted(g.edges))}
        self.cover: list[int] = [0] * len(self._pair_id)
        self.present: list[list[Edge]] = [[] for _ in self.pool]
        self._pos: list[dict[Edge, int]] = [{} for _ in self.pool]
        self.total = 0
        for e, m in state.edges.items():
            if len(e) > self.L:
                raise ValueError(f"initial hyperedge {e} exceeds max_edge_size={self.L}")
            if not self.info(e)[1]:
                raise ValueError(f"initial hyperedge {e} is not a clique of the observed graph")
            for _ in range(m):
                self._apply_add(e)
        self.log_post = log_posterior(g, state, params)
        if self.log_post == NEG_INF:
            raise ValueError("initial state has zero posterior probability")
        self._warm_cache()

    def _warm_cache(self, budget: int = PRECOMPUTE_BUDGET) -> None:
        # fill the subset table up front when it is small enough, so the
        # sampling loop runs at steady-state cost from the first iteration
        total = 0
        for c in self.pool:
            total += sum(math.comb(len(c), k) for k in range(2, min(len(c), self.L) + 1))
            if total > budget:
                return
        for c in self.pool:
            for k in range(2, min(len(c), self.L) + 1):
                for f in combinations(c, k):
                    self.info(f)

    # -- per-subset cache --------------------------------------------------

    def info(self, f: Edge) -> tuple:
        """(pair ids of f, candidate indices containing f, log of the ADD weight of f)."""
        cached = self._info.get(f)
        if cached is not None:
            return cached
        sets = [self._vpool.get(v, set()) for v in f]
        sup = tuple(sorted(set.intersection(*sets))) if sets else ()
        weight = 0.0
        k = len(f)
        for idx in sup:
            n = len(self.pool[idx])
            m = min(n, self.L)
            if k <= m:
                weight += 1.0 / ((m - 1) * math.comb(n, k))
        pid = self._pair_id
        entry = (tuple(pid.get(pr, -1) for pr in combinations(f, 2)), sup, math.log(weight) if weight > 0 else NEG_INF)
        self._info[f] = entry
        return entry

    def _term(self, k: int) -> float:
        terms = self._terms
        while k >= len(terms):
            terms.append(log_edge_term(len(terms), self.params.p))
        return terms[k]

    # -- state mutation ----------------------------------------------------

    def _apply_add(self, f: Edge) -> None:
        pairs, sup, _ = self.info(f)
        old = self.edges.get(f, 0)
        self.edges[f] = old + 1
        if old == 0:
            for c in sup:
                pos = self._pos[c]
                pos[f] = len(self.present[c])
                self.present[c].append(f)
        cover = self.cover
        for pr in pairs:
            cover[pr] += 1
        self.total += 1

    def _apply_remove(self, f: Edge) -> None:
        pairs, sup, _ = self.info(f)
        old = self.edges[f]
        if old == 1:
            del self.edges[f]
            for c in sup:
                lst, pos = self.present[c], self._pos[c]
                i = pos.pop(f)
                last = lst.pop()
                if last != f:
                    lst[i] = last
                    pos[last] = i
        else:
            self.edges[f] = old - 1
        cover = self.cover
        for pr in pairs:
            cover[pr] -= 1
        self.total -= 1

    def hypergraph(self) -> Hypergraph:
        return Hypergraph(self.g.num_vertices, self.edges)

    # -- proposal ----------------------------------------------------------

    def propose(self, rnd) -> tuple[ProposalMove, float, float]:
        """Draw a move; return ``(move, delta_log_posterior, log_q_ratio)``.

        ``rnd`` is a zero-argument callable returning uniforms on [0, 1).
        """
        if not self.pool:
            return ProposalMove("null", (), None), 0.0, 0.0
        ci = int(rnd() * len(self.pool))
        cand = self.pool[ci]
        if rnd() < 0.5:
            n = len(cand)
            m = n if n < self.L else self.L
            s = 2 + int(rnd() * (m - 1))
            f = cand if s == n else _sample_subset(cand, s, rnd)
            return (ProposalMove("add", cand, f),) + self.score_add(f)
        subs = self.present[ci]
        if not subs:
            return ProposalMove("null", cand, None), 0.0, 0.0
        f = subs[int(rnd() * len(subs))]
        return (ProposalMove("remove", cand, f),) + self.score_remove(f)

    def score_add(self, f: Edge) -> tuple[float, float]:
        pairs, sup, log_w = self.info(f)
        cover = self.cover
        terms = self._terms
        d = 0.0
        for pr in pairs:
            k = cover[pr]
            if k + 1 >= len(terms):
                self._term(k + 1)
            d += terms[k + 1] - terms[k]
        old = self.edges.get(f, 0)
        d -= self.params.beta
        if old:
            d -= self.params.gamma
        inc = 0 if old else 1
        rev = 0.0
        for c in sup:
            rev += 1.0 / (len(self.present[c]) + inc)
        return d, math.log(rev) - log_w

    def score_remove(self, f: Edge) -> tuple[float, float]:
        pairs, sup, log_w = self.info(f)
        cover = self.cover
        terms = self._terms
        d = 0.0
        for pr in pairs:
            k = cover[pr]
            if k == 1:
                d = NEG_INF
                break
            if k >= len(terms):
                self._term(k)
            d += terms[k - 1] - terms[k]
        if d != NEG_INF:
            d += self.params.beta
            if self.edges[f] >= 2:
                d += self.params.gamma
        fwd = 0.0
        for c in sup:
            fwd += 1.0 / len(self.present[c])
        return d, log_w - math.log(fwd)

    def apply(self, move: ProposalMove, delta: float) -> None:
        if move.kind == "add":
            self._apply_add(move.sub)
        elif move.kind == "remove":
            self._apply_remove(move.sub)
        else:
            return
        self.log_post += delta

    def projects_exactly(self) -> bool:
        """Full recomputation of project(state) == g."""
        return project(self.hypergraph()) == self.g


def _sample_subset(cand: Edge, s: int, rnd) -> Edge:
    """Uniform ``s``-subset of a sorted tuple (Floyd's algorithm)."""
    n = len(cand)
    chosen = set()
    for j in range(n - s, n):
        t = int(rnd() * (j + 1))
        chosen.add(j if t in chosen else t)
    return tuple(cand[i] for i in sorted(chosen))


def acceptance(g: PairwiseGraph, h_old: Hypergraph, h_new: Hypergraph, log_q_ratio: float,
               params: ModelParams) -> float:
    """Metropolis-Hastings acceptance probability from full posterior evaluations."""
    lp_old = log_posterior(g, h_old, params)
    if lp_old == NEG_INF:
        raise ValueError("current state has zero posterior probability")
    lp_new = log_posterior(g, h_new, params)
    return _alpha(lp_new - lp_old + log_q_ratio if lp_new != NEG_INF else NEG_INF)


def _alpha(x: float) -> float:
    if x >= 0.0:
        return 1.0
    return math.exp(x)


def propose(g: PairwiseGraph, state: Hypergraph, rng: random.Random,
            params: ModelParams) -> tuple[Hypergraph, ProposalMove, float]:
    """One proposal from ``state``: ``(candidate, move, log_q_ratio)``.

    Convenience wrapper that rebuilds the chain bookkeeping on every call;
    ``run`` keeps it incrementally instead.
    """
    chain = HypergraphChain(g, params, state=state)
    move, _, lq = chain.propose(rng.random)
    if move.kind == "add":
        return state.with_edge(move.sub), move, lq
    if move.kind == "remove":
        return state.without_edge(move.sub), move, lq
    return state, move, 0.0


def log_q_ratio(g: PairwiseGraph, state: Hypergraph, move: ProposalMove,
                params: ModelParams) -> float:
    """log Q(state | new) - log Q(new | state) for a given add/remove move."""
    chain = HypergraphChain(g, params, state=state)
    if move.kind == "add":
        return chain.score_add(move.sub)[1]
    if move.kind == "remove":
        return chain.score_remove(move.sub)[1]
    return 0.0


class MapTracker:
    """Best visited state; ties keep the earliest iteration."""

    def __init__(self):
        self.log_posterior = NEG_INF
        self.iteration = -1
        self.edges: dict | None = None

    def update(self, t: int, lp: float, edges: dict) -> bool:
        if self.edges is None or lp > self.log_posterior + MAP_TIE_TOL:
            self.log_posterior, self.iteration, self.edges = lp, t, dict(edges)
            return True
        return False


def run(g: PairwiseGraph, config: SamplerConfig, initial: Hypergraph | None = None,
        cliques: list[Edge] | None = None) -> SamplerTrace:
    """Run one chain for ``config.iterations`` steps and return its trace."""
    params = config.params
    chain = HypergraphChain(g, params, state=initial, cliques=cliques, clique_cap=config.clique_cap)
    trace = SamplerTrace()
    trace.initial = chain.hypergraph()
    trace.initial_log_posterior = chain.log_post
    trace.iterations = config.iterations
    if config.count_visits:
        trace.visit_counts = Counter()

    rng = random.Random(config.seed)
    rnd = rng.random
    tracker = MapTracker()
    tracker.update(0, chain.log_post, chain.edges)

    # the loop allocates no reference cycles; a collector pass would scan the
    # whole heap and make the per-iteration cost grow with the graph size
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        _loop(chain, config, trace, tracker, rnd)
    finally:
        if gc_was_enabled:
            gc.enable()

    trace.final = chain.hypergraph()
    trace.map_hypergraph = Hypergraph(g.num_vertices, tracker.edges)
    trace.map_iteration = tracker.iteration
    trace.map_log_posterior = log_posterior(g, trace.map_hypergraph, params)
    log.debug("chain done: T=%d accepted=%d map_t=%d map_lp=%.6f", config.iterations,
              trace.accepted_count, tracker.iteration, trace.map_log_posterior)
    return trace


def _loop(chain: HypergraphChain, config: SamplerConfig, trace: SamplerTrace,
          tracker: MapTracker, rnd) -> None:
    record = config.record_trace
    stride = config.trace_stride
    time_stride = config.time_stride
    burn_in = config.burn_in
    hard = config.hard_constraint
    debug = config.debug
    visits = trace.visit_counts
    sample_stride = config.sample_stride
    t_arr, a_arr, acc_arr = trace.t, trace.alpha, trace.accepted
    n_arr, lp_arr = trace.num_hyperedges, trace.log_posterior
    propose_move = chain.propose
    exp = math.exp
    key = tuple(sorted(chain.edges.items()))
    accepted_count = null_moves = constraint_rejections = checks = 0

    t0 = time.perf_counter_ns()
    trace.timing.append((0, 0, chain.total))
    for t in range(1, config.iterations + 1):
        move, delta, lq = propose_move(rnd)
        if move.kind == "null":
            alpha = 1.0
            accept = True
            null_moves += 1
        elif delta == NEG_INF:
            # only a removal that uncovers an observed pair scores -inf: it
            # breaks project(H*) == G and has zero likelihood in either mode
            alpha = 0.0
            accept = False
            if hard:
                constraint_rejections += 1
        else:
            x = delta + lq
            alpha = 1.0 if x >= 0.0 else exp(x)
            accept = rnd() < alpha
            if accept:
                chain.apply(move, delta)
                if debug:
                    checks += 1
                    _debug_check(chain, t)
                if chain.log_post > tracker.log_posterior + MAP_TIE_TOL:
                    tracker.update(t, chain.log_post, chain.edges)
                if visits is not None:
                    key = None
        if accept:
            accepted_count += 1
        if record and t % stride == 0:
            t_arr.append(t)
            a_arr.append(alpha)
            acc_arr.append(accept)
            n_arr.append(chain.total)
            lp_arr.append(chain.log_post)
        if t % time_stride == 0:
            trace.timing.append((t, time.perf_counter_ns() - t0, chain.total))
        if t > burn_in:
            if visits is not None:
                if key is None:
                    key = tuple(sorted(chain.edges.items()))
                visits[key] += 1
            if sample_stride and (t - burn_in) % sample_stride == 0:
                trace.samples.append((t, chain.hypergraph()))
    if config.iterations % time_stride:
        trace.timing.append((config.iterations, time.perf_counter_ns() - t0, chain.total))

    trace.accepted_count = accepted_count
    trace.null_moves = null_moves
    trace.constraint_rejections = constraint_rejections
    trace.projection_checks = checks


def _debug_check(chain: HypergraphChain, t: int) -> None:
    h = chain.hypergraph()
    if project(h) != chain.g:
        raise ProjectionViolation(f"iteration {t}: accepted state does not project onto the graph")
    exact = log_posterior(chain.g, h, chain.params)
    if not math.isclose(exact, chain.log_post, rel_tol=1e-9, abs_tol=1e-7):
        raise AssertionError(
            f"iteration {t}: incremental log-posterior {chain.log_post} drifted from {exact}"
        )


def map_estimate(trace: SamplerTrace) -> Hypergraph:
    """Highest-posterior state visited by the chain (earliest on ties)."""
    if trace.map_hypergraph is None:
        raise ValueError("trace holds no states")
    return trace.map_hypergraph
