"""Loading n-ary relational datasets as hypergraphs.

Supported formats:

``nary-tsv``
    ``relation<TAB>entity1<TAB>...<TAB>entityk`` per line (FB-AUTO, JF17K,
    M-FB15k style).  The relation label is dropped.
``simplex-list``
    space-separated entity names per line (NDC, Walmart style).
``hg``
    the native hypergraph text format.

Within a fact repeated entities are collapsed; facts left with fewer than two
distinct entities are skipped and counted.  Identical facts accumulate
multiplicity.  Several files (e.g. train/valid/test splits) are concatenated.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .hypergraph import Hypergraph, ParseError, deserialize

FORMATS = ("nary-tsv", "simplex-list", "hg")


class DatasetError(ValueError):
    """Unreadable or empty dataset."""


class EntityDictionary:
    """Bijection between entity strings and dense vertex ids."""

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._names: list[str] = []

    def id(self, name: str) -> int:
        idx = self._ids.get(name)
        if idx is None:
            idx = self._ids[name] = len(self._names)
            self._names.append(name)
        return idx

    def name(self, idx: int) -> str:
        return self._names[idx]

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def names(self) -> list[str]:
        return list(self._names)


@dataclass
class IngestReport:
    facts_read: int = 0
    hyperedges: int = 0
    distinct_hyperedges: int = 0
    skipped_degenerate: int = 0
    entities: int = 0
    relation_labels_dropped: int = 0
    size_histogram: dict[int, int] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["size_histogram"] = {str(k): v for k, v in sorted(self.size_histogram.items())}
        return d


def _read_text(path) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc


def ingest(paths, fmt: str) -> tuple[Hypergraph, EntityDictionary, IngestReport]:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if isinstance(paths, (str, bytes)) or not hasattr(paths, "__iter__"):
        paths = [paths]
    paths = [str(p) for p in paths]
    entities = EntityDictionary()
    report = IngestReport(files=paths)
    facts: Counter = Counter()
    relations: set[str] = set()

    if fmt == "hg":
        if len(paths) != 1:
            raise ValueError("the hg format takes exactly one file")
        try:
            h = deserialize(_read_text(paths[0]), "hg")
        except ParseError as exc:
            raise DatasetError(f"{paths[0]}: {exc}") from exc
        for v in range(h.num_vertices):
            entities.id(str(v))
        report.facts_read = h.num_edges
        facts.update(h.edges)
    else:
        for path in paths:
            for raw in _read_text(path).splitlines():
                line = raw.strip()
                if not line:
                    continue
                if fmt == "nary-tsv":
                    fields = [x.strip() for x in raw.rstrip("\r\n").split("\t")]
                    relations.add(fields[0])
                    names = [x for x in fields[1:] if x]
                else:
                    names = line.split()
                report.facts_read += 1
                distinct = list(dict.fromkeys(names))
                if len(distinct) < 2:
                    report.skipped_degenerate += 1
                    continue
                facts[tuple(sorted(entities.id(x) for x in distinct))] += 1
        h = Hypergraph(len(entities), facts)

    if h.num_edges == 0:
        raise DatasetError(f"no hyperedges found in {', '.join(paths)}")
    report.hyperedges = h.num_edges
    report.distinct_hyperedges = h.num_distinct
    report.entities = len(entities)
    report.relation_labels_dropped = len(relations)
    hist: Counter = Counter()
    for e, m in h.edges.items():
        hist[len(e)] += m
    report.size_histogram = dict(sorted(hist.items()))
    return h, entities, report


def subsample(h: Hypergraph, max_edges: int, seed: int) -> Hypergraph:
    """Uniform sample of distinct hyperedges (multiplicities kept), with
    vertices renumbered densely in order of first appearance among the sorted
    sampled edges."""
    if max_edges <= 0:
        raise ValueError("max_edges must be positive")
    distinct = list(h.edges)
    if max_edges < len(distinct):
        rng = random.Random(seed)
        picked = sorted(rng.sample(range(len(distinct)), max_edges))
        distinct = [distinct[i] for i in picked]
    remap: dict[int, int] = {}
    for e in distinct:
        for v in e:
            remap.setdefault(v, len(remap))
    return Hypergraph(len(remap), {tuple(remap[v] for v in e): h.edges[e] for e in distinct})
