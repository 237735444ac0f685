"""Citer classification and disruption measures over the citation graph.

For a focal paper FP with references In_FP and citers Out_FP:

* J^l = citers sharing at least l references with FP; I^l = the remaining
  citers, so I^l and J^l partition Out_FP for every l.
* K = documents that cite at least one of FP's references but do not cite FP
  (and are not FP itself).
* di_l = (|I|-|J^l|) / (|I|+|J^l|+|K|); dinok_l drops the K term.
* depth = share of citers that also cite another citer of FP; breadth is its
  complement. dependence = mean shared-reference count over citers.
  independence = (dinok_1 + 1) / 2.

Documents without citers yield explicit None markers, never silent zeros.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ._util import parallel_map
from .corpus import CorpusStore
from .errors import InvalidParams, UnknownDocument
from .graphs import CitationGraph, build_citation_graph
from .records import ScoreRecord

DEFAULT_L_VALUES = (1, 5)
ALL_MEASURES = ("di1", "di5", "dinok1", "dinok5", "depth", "breadth", "dependence", "independence")

_DI_RE = re.compile(r"^di(\d+)$")
_DINOK_RE = re.compile(r"^dinok(\d+)$")


@dataclass
class CiterClassification:
    """Cardinalities of the I/J/K sets for one focal paper.

    ``i_counts[l] + j_counts[l] == citer_count`` for every requested l.
    ``k_count`` is -1 when the K set was not requested.
    """

    doc_id: str
    i_counts: dict[int, int]
    j_counts: dict[int, int]
    k_count: int
    citer_count: int
    ref_count: int
    shared_ref_total: int


def classify_citers(
    doc_id: str,
    graph: CitationGraph,
    l_values: tuple[int, ...] = DEFAULT_L_VALUES,
    with_k: bool = True,
) -> CiterClassification:
    fp = graph.index.get(doc_id)
    if fp is None:
        raise UnknownDocument(doc_id)
    refs = graph.ref_set(fp)
    citer_idx = graph.citers_of[fp]
    j_counts = {l: 0 for l in l_values}
    shared_total = 0
    for c in citer_idx:
        shared = len(graph.ref_set(int(c)) & refs)
        shared_total += shared
        for l in l_values:
            if shared >= l:
                j_counts[l] += 1
    n_citers = len(citer_idx)
    i_counts = {l: n_citers - j_counts[l] for l in l_values}
    k_count = _k_count(graph, fp, refs, citer_idx) if with_k else -1
    return CiterClassification(
        doc_id=doc_id,
        i_counts=i_counts,
        j_counts=j_counts,
        k_count=k_count,
        citer_count=n_citers,
        ref_count=len(refs),
        shared_ref_total=shared_total,
    )


def _k_count(graph: CitationGraph, fp: int, refs: set[int], citer_idx: np.ndarray) -> int:
    if not refs:
        return 0
    arrays = [graph.citers_of[r] for r in refs]
    touched = np.unique(np.concatenate(arrays))
    excluded = np.append(citer_idx, fp)
    return int(touched.size - np.intersect1d(touched, excluded, assume_unique=True).size)


@dataclass
class DisruptionRecord:
    doc_id: str
    values: dict[str, float | None]
    classification: CiterClassification


def disruption_scores(
    doc_id: str,
    graph: CitationGraph,
    l_values: tuple[int, ...] = DEFAULT_L_VALUES,
    with_k: bool = True,
) -> DisruptionRecord:
    cls = classify_citers(doc_id, graph, l_values=l_values, with_k=with_k)
    fp = graph.index[doc_id]
    n = cls.citer_count
    values: dict[str, float | None] = {}
    for l in l_values:
        i, j = cls.i_counts[l], cls.j_counts[l]
        if with_k:
            denom = i + j + cls.k_count
            values[f"di{l}"] = (i - j) / denom if denom > 0 else None
        values[f"dinok{l}"] = (i - j) / (i + j) if n > 0 else None
    if n > 0:
        citer_set = set(int(c) for c in graph.citers_of[fp])
        deep = sum(1 for c in citer_set if not graph.ref_set(c).isdisjoint(citer_set))
        values["depth"] = deep / n
        values["breadth"] = 1.0 - deep / n
        values["dependence"] = cls.shared_ref_total / n
        dinok1 = values.get("dinok1")
        values["independence"] = (dinok1 + 1.0) / 2.0 if dinok1 is not None else None
    else:
        values["depth"] = values["breadth"] = values["dependence"] = values["independence"] = None
    return DisruptionRecord(doc_id=doc_id, values=values, classification=cls)


def parse_measures(measures: tuple[str, ...]) -> tuple[tuple[int, ...], bool]:
    """Validate measure names; returns (l values needed, whether K is needed)."""
    l_values: set[int] = set()
    with_k = False
    for m in measures:
        if m in ("depth", "breadth", "dependence"):
            continue
        if m == "independence":
            l_values.add(1)
            continue
        di = _DI_RE.match(m)
        dinok = _DINOK_RE.match(m)
        if di:
            l_values.add(int(di.group(1)))
            with_k = True
        elif dinok:
            l_values.add(int(dinok.group(1)))
        else:
            raise InvalidParams(f"unknown disruption measure: {m}")
    if any(l < 1 for l in l_values):
        raise InvalidParams("l must be >= 1")
    l_values.add(1)
    return tuple(sorted(l_values)), with_k


def disruption_run(
    store: CorpusStore,
    year: int | None = None,
    measures: tuple[str, ...] = ALL_MEASURES,
    threads: int = 1,
    graph: CitationGraph | None = None,
) -> list[ScoreRecord]:
    """Score all documents (or one publication year) on the requested measures."""
    if graph is None:
        graph = build_citation_graph(store)
    l_values, with_k = parse_measures(measures)
    if year is None:
        doc_ids = list(graph.ids)
    else:
        doc_ids = store.year_index.get(year, [])

    def score(doc_id: str) -> ScoreRecord:
        rec = disruption_scores(doc_id, graph, l_values=l_values, with_k=with_k)
        fp = graph.index[doc_id]
        cls = rec.classification
        meta = {
            "citers": cls.citer_count,
            "refs_resolved": int(graph.resolved_ref_count[fp]),
            "refs_total": int(graph.total_ref_count[fp]),
            "shared_refs": cls.shared_ref_total,
        }
        for l in l_values:
            meta[f"i{l}"] = cls.i_counts[l]
            meta[f"j{l}"] = cls.j_counts[l]
        if with_k:
            meta["k"] = cls.k_count
        scores = {m: rec.values[m] for m in measures}
        return ScoreRecord(
            doc_id=doc_id,
            indicator="disruption",
            entity="citations",
            year=store.documents[doc_id].year,
            params={"measures": list(measures)},
            scores=scores,
            meta=meta,
        )

    return parallel_map(score, doc_ids, threads=threads)
