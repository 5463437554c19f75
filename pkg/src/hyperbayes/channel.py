"""Antipodal modulation of a pairwise graph over an AWGN channel.

The graph is framed densely: one symbol per unordered vertex pair in
row-major upper-triangular order, +1 for an edge and -1 otherwise, so noise
can both delete and insert edges.  SNR is per symbol with unit symbol
energy: ``snr_db = 10*log10(1/sigma^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypergraph import PairwiseGraph

DEFAULT_MAX_VERTICES = 2000


def parse_snr(value) -> float:
    """Accept a number or the ``noiseless`` / ``inf`` sentinel."""
    if isinstance(value, str) and value.strip().lower() in ("noiseless", "inf", "+inf"):
        return math.inf
    snr = float(value)
    if math.isnan(snr) or snr == -math.inf:
        raise ValueError(f"invalid SNR {value!r}")
    return snr


@dataclass(frozen=True)
class ChannelConfig:
    snr_db: float = math.inf  # math.inf is the noiseless sentinel
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "snr_db", parse_snr(self.snr_db))

    @property
    def noiseless(self) -> bool:
        return self.snr_db == math.inf

    @property
    def sigma(self) -> float:
        return 0.0 if self.noiseless else 10.0 ** (-self.snr_db / 20.0)

    def to_dict(self) -> dict:
        return {
            "snr_db": "noiseless" if self.noiseless else self.snr_db,
            "seed": self.seed,
            "snr_reference": "per symbol, unit-energy antipodal symbols",
        }


@dataclass(frozen=True)
class SymbolFrame:
    num_vertices: int
    symbols: np.ndarray

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Vertex pair ``(rows[k], cols[k])`` carried by symbol ``k``."""
        return np.triu_indices(self.num_vertices, k=1)


@dataclass(frozen=True)
class ChannelReport:
    symbols: int
    flips: int
    edges_deleted: int
    edges_inserted: int

    @property
    def flip_rate(self) -> float:
        return self.flips / self.symbols if self.symbols else 0.0

    def to_dict(self) -> dict:
        return {
            "symbols": self.symbols,
            "flips": self.flips,
            "edge_flip_rate": self.flip_rate,
            "edges_deleted": self.edges_deleted,
            "edges_inserted": self.edges_inserted,
        }


def _pair_index(n: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    # position of (i, j), i < j, in row-major upper-triangular order
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def modulate(g: PairwiseGraph, max_vertices: int = DEFAULT_MAX_VERTICES) -> SymbolFrame:
    n = g.num_vertices
    if n > max_vertices:
        raise ValueError(f"{n} vertices exceeds the framing cap of {max_vertices}")
    symbols = -np.ones(n * (n - 1) // 2, dtype=np.float64)
    if g.edges:
        e = np.array(sorted(g.edges), dtype=np.int64)
        symbols[_pair_index(n, e[:, 0], e[:, 1])] = 1.0
    return SymbolFrame(n, symbols)


def transmit(frame: SymbolFrame, cfg: ChannelConfig) -> SymbolFrame:
    """Add i.i.d. Gaussian noise (PCG64 seeded with ``cfg.seed``)."""
    if cfg.noiseless:
        return SymbolFrame(frame.num_vertices, frame.symbols.copy())
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    noise = rng.standard_normal(frame.symbols.shape[0]) * cfg.sigma
    return SymbolFrame(frame.num_vertices, frame.symbols + noise)


def demodulate(frame: SymbolFrame) -> PairwiseGraph:
    """Threshold at zero: a pair is present iff its symbol is positive."""
    rows, cols = frame.pairs()
    hit = frame.symbols > 0
    return PairwiseGraph(frame.num_vertices, zip(rows[hit].tolist(), cols[hit].tolist()))


def run_channel(g: PairwiseGraph, cfg: ChannelConfig,
                max_vertices: int = DEFAULT_MAX_VERTICES) -> tuple[PairwiseGraph, ChannelReport]:
    clean = modulate(g, max_vertices)
    received = transmit(clean, cfg)
    g_hat = demodulate(received)
    flipped = np.count_nonzero((clean.symbols > 0) != (received.symbols > 0))
    report = ChannelReport(
        symbols=int(clean.symbols.shape[0]),
        flips=int(flipped),
        edges_deleted=len(g.edges - g_hat.edges),
        edges_inserted=len(g_hat.edges - g.edges),
    )
    return g_hat, report
