"""Evaluation quantities: recovery scores, size histograms, compression rate,
acceptance-entropy histograms and runtime convergence curves."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Hypergraph, hyperedge_line, project, serialize
from .sampler import SamplerTrace, binary_entropy

ENTROPY_BINS = 50


@dataclass
class RecoveryScore:
    precision: float
    recall: float
    f1: float
    jaccard_mean: float
    matched: int
    truth_distinct: int
    recovered_distinct: int
    multiplicity_agreement: float
    per_size: dict[int, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["per_size"] = {str(k): v for k, v in sorted(self.per_size.items())}
        return d


def _ratio(num: int, den: int, empty_other: bool) -> float:
    if den:
        return num / den
    return 1.0 if empty_other else 0.0


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def recovery_score(truth: Hypergraph, recovered: Hypergraph) -> RecoveryScore:
    """Exact-match precision/recall/F1 over distinct hyperedges plus the mean
    best-match Jaccard of each ground-truth hyperedge.  Multiplicities are
    ignored for matching; ``multiplicity_agreement`` is the fraction of
    matched hyperedges whose multiplicities agree."""
    t_set, r_set = set(truth.edges), set(recovered.edges)
    common = t_set & r_set
    precision = _ratio(len(common), len(r_set), not t_set)
    recall = _ratio(len(common), len(t_set), not r_set)

    by_vertex = defaultdict(list)
    for e in r_set:
        for v in e:
            by_vertex[v].append(e)
    jac = []
    for e in t_set:
        es = set(e)
        best = 0.0
        for v in e:
            for r in by_vertex.get(v, ()):
                inter = len(es.intersection(r))
                best = max(best, inter / (len(e) + len(r) - inter))
        jac.append(best)
    if t_set:
        jaccard = float(np.mean(jac))
    else:
        jaccard = 1.0 if not r_set else 0.0

    agree = sum(1 for e in common if truth.edges[e] == recovered.edges[e])
    per_size = {}
    t_by = Counter(len(e) for e in t_set)
    r_by = Counter(len(e) for e in r_set)
    c_by = Counter(len(e) for e in common)
    for k in sorted(set(t_by) | set(r_by)):
        p_k = _ratio(c_by[k], r_by[k], not t_by[k])
        r_k = _ratio(c_by[k], t_by[k], not r_by[k])
        per_size[k] = {"precision": p_k, "recall": r_k, "f1": _f1(p_k, r_k),
                       "truth": t_by[k], "recovered": r_by[k], "matched": c_by[k]}
    return RecoveryScore(
        precision=precision, recall=recall, f1=_f1(precision, recall), jaccard_mean=jaccard,
        matched=len(common), truth_distinct=len(t_set), recovered_distinct=len(r_set),
        multiplicity_agreement=agree / len(common) if common else 1.0, per_size=per_size,
    )


def size_histogram(h: Hypergraph, weighted: bool = False) -> dict[int, int]:
    """Hyperedge count per size; ``weighted`` counts multiplicities."""
    hist: Counter = Counter()
    for e, m in h.edges.items():
        hist[len(e)] += m if weighted else 1
    return dict(sorted(hist.items()))


def payload_bytes(h: Hypergraph, max_edge_size: int) -> int:
    """Bytes sent under size limit L: the projected pairwise graph plus the
    verbatim line of every hyperedge larger than L."""
    size = len(serialize(project(h)))
    for e, m in h.edges.items():
        if len(e) > max_edge_size:
            size += len(hyperedge_line(e, m))
    return size


def compression_rate(h: Hypergraph, max_edge_size: int) -> float:
    """bytes(full hypergraph file) / bytes(transmitted payload at limit L)."""
    if max_edge_size < 2:
        raise ValueError("max_edge_size must be at least 2")
    return len(serialize(h)) / payload_bytes(h, max_edge_size)


def entropy_distribution(trace_or_alpha, bins: int = ENTROPY_BINS) -> dict:
    """Histogram of binary_entropy(alpha) on ``bins`` uniform bins over [0, 1]."""
    if isinstance(trace_or_alpha, SamplerTrace):
        alpha = np.frombuffer(trace_or_alpha.alpha, dtype=np.float64)
    else:
        alpha = np.asarray(trace_or_alpha, dtype=np.float64)
    h = binary_entropy(alpha) if alpha.size else np.zeros(0)
    counts, edges = np.histogram(h, bins=bins, range=(0.0, 1.0))
    n = int(h.size)
    return {
        "bin_edges": edges.tolist(),
        "counts": counts.astype(int).tolist(),
        "n": n,
        "mean": float(h.mean()) if n else 0.0,
        # share of decisions with entropy < 0.1 (alpha near 0 or 1)
        "confident_fraction": float(np.count_nonzero(h < 0.1) / n) if n else 0.0,
    }


def convergence_curve(trace: SamplerTrace, max_points: int = 200) -> list[tuple[int, float, int]]:
    """Downsampled ``(t, elapsed_ms, |E|)`` series with monotone time."""
    pts = trace.timing
    if len(pts) > max_points:
        idx = np.unique(np.linspace(0, len(pts) - 1, max_points).round().astype(int))
        pts = [pts[i] for i in idx]
    return [(t, ns / 1e6, n) for t, ns, n in pts]


def linear_fit_r2(x, y) -> float:
    """Coefficient of determination of the least-squares line through (x, y)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return float("nan")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(1.0 - resid.dot(resid) / ((y - y.mean()) ** 2).sum())


def removal_r2(curve) -> float:
    """R^2 of hyperedges removed so far against elapsed time."""
    if not curve:
        return float("nan")
    n0 = curve[0][2]
    return linear_fit_r2([c[1] for c in curve], [n0 - c[2] for c in curve])
