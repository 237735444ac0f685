"""Entity co-occurrence graphs and the document citation graph.

A co-occurrence graph is an undirected weighted graph over knowledge entities
(journals cited by documents, or keywords). Each document contributes at most
1 to an edge weight: its distinct entities are paired once, so an edge weight
counts the documents that combine the two entities. The total weight N is the
upper-triangle sum, and weighted degrees satisfy sum(k_i) = 2N.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal

import numpy as np
from scipy import sparse

from .corpus import CorpusStore, DocumentRecord

logger = logging.getLogger(__name__)

EntityKind = Literal["journals", "keywords"]
ENTITY_KINDS = ("journals", "keywords")


def check_entity_kind(entity_kind: str) -> str:
    if entity_kind not in ENTITY_KINDS:
        raise ValueError(f"entity_kind must be one of {ENTITY_KINDS}, got {entity_kind!r}")
    return entity_kind


def entities_of(doc: DocumentRecord, entity_kind: str) -> list[str]:
    """Distinct entities of one document, sorted for deterministic pairing."""
    check_entity_kind(entity_kind)
    if entity_kind == "journals":
        return sorted({r.source for r in doc.references if r.source is not None})
    return sorted(set(doc.keywords))


def entity_occurrences(doc: DocumentRecord, entity_kind: str) -> list[tuple[str, int | None]]:
    """All (entity, reference-year) occurrences, multiplicity preserved.

    Keywords carry no year and land in the missing-year stratum of a
    resampling plan; journal occurrences keep the cited work's year.
    """
    check_entity_kind(entity_kind)
    if entity_kind == "journals":
        return [(r.source, r.year) for r in doc.references if r.source is not None]
    return [(kw, None) for kw in doc.keywords]


@dataclass(frozen=True)
class DocumentCombinations:
    """The unordered distinct-entity pairs a document contributes (its edge set)."""

    doc_id: str
    pairs: frozenset[tuple[str, str]]


def extract_combinations(doc: DocumentRecord, entity_kind: str) -> DocumentCombinations:
    ents = entities_of(doc, entity_kind)
    return DocumentCombinations(doc_id=doc.id, pairs=frozenset(itertools.combinations(ents, 2)))


@dataclass
class CoocGraph:
    """Symmetric integer-weighted co-occurrence graph with dense node indexing.

    Nodes are indexed in sorted entity-string order, which makes the layout
    independent of document order.
    """

    entity_kind: str
    year_span: tuple[int, int] | None
    names: tuple[str, ...]
    node_ids: dict[str, int]
    adj: sparse.csr_matrix
    degrees: np.ndarray
    total_weight: int

    @property
    def n_nodes(self) -> int:
        return len(self.names)

    def weight(self, a: str, b: str) -> int:
        i = self.node_ids.get(a)
        j = self.node_ids.get(b)
        if i is None or j is None:
            return 0
        return int(self.adj[i, j])

    def degree(self, a: str) -> int:
        i = self.node_ids.get(a)
        return int(self.degrees[i]) if i is not None else 0

    def iter_edges(self) -> Iterator[tuple[int, int, int]]:
        """Upper-triangle edges as (i, j, w) with i < j, in row-major order."""
        coo = sparse.triu(self.adj, k=1).tocoo()
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            yield int(coo.row[k]), int(coo.col[k]), int(coo.data[k])

    def edge_pairs(self) -> set[tuple[str, str]]:
        """Edge set as sorted entity-name pairs, comparable across graphs."""
        return {(self.names[i], self.names[j]) for i, j, _ in self.iter_edges()}

    def pair_index(self, a: str, b: str) -> tuple[int, int] | None:
        i = self.node_ids.get(a)
        j = self.node_ids.get(b)
        if i is None or j is None:
            return None
        return (i, j) if i < j else (j, i)


def _assemble(entity_kind: str, year_span, names: tuple[str, ...], counts: dict[tuple[int, int], int]) -> CoocGraph:
    v = len(names)
    node_ids = {name: i for i, name in enumerate(names)}
    if counts:
        ii = np.fromiter((p[0] for p in counts), dtype=np.int64, count=len(counts))
        jj = np.fromiter((p[1] for p in counts), dtype=np.int64, count=len(counts))
        ww = np.fromiter(counts.values(), dtype=np.int64, count=len(counts))
        upper = sparse.coo_matrix((ww, (ii, jj)), shape=(v, v))
        adj = (upper + upper.T).tocsr()
        total = int(ww.sum())
    else:
        adj = sparse.csr_matrix((v, v), dtype=np.int64)
        total = 0
    degrees = np.asarray(adj.sum(axis=1)).reshape(-1).astype(np.int64) if v else np.zeros(0, dtype=np.int64)
    return CoocGraph(
        entity_kind=entity_kind,
        year_span=year_span,
        names=names,
        node_ids=node_ids,
        adj=adj,
        degrees=degrees,
        total_weight=total,
    )


def build_cooc_graph(docs: Iterable[DocumentRecord], entity_kind: str, year_span: tuple[int, int] | None = None) -> CoocGraph:
    """Sum each document's binary pair contributions into one weighted graph.

    Every entity occurring in any document registers a node, including entities
    from single-entity documents that contribute no edge.
    """
    check_entity_kind(entity_kind)
    docs = list(docs)
    vocab: set[str] = set()
    per_doc: list[list[str]] = []
    for doc in docs:
        ents = entities_of(doc, entity_kind)
        vocab.update(ents)
        per_doc.append(ents)
    names = tuple(sorted(vocab))
    node_ids = {name: i for i, name in enumerate(names)}
    counts: dict[tuple[int, int], int] = {}
    for ents in per_doc:
        idx = [node_ids[e] for e in ents]
        for a, b in itertools.combinations(idx, 2):
            counts[(a, b)] = counts.get((a, b), 0) + 1
    if year_span is None and docs:
        year_span = (min(d.year for d in docs), max(d.year for d in docs))
    return _assemble(entity_kind, year_span, names, counts)


def year_graph(store: CorpusStore, entity_kind: str, t: int) -> CoocGraph:
    from .corpus import docs_in_year

    return build_cooc_graph(docs_in_year(store, t), entity_kind, year_span=(t, t))


def window_graph(store: CorpusStore, entity_kind: str, lo: int, hi: int) -> CoocGraph:
    """Graph over documents with lo <= year <= hi (weights sum across years)."""
    docs = [
        store.documents[doc_id]
        for year in sorted(store.year_index)
        if lo <= year <= hi
        for doc_id in store.year_index[year]
    ]
    return build_cooc_graph(docs, entity_kind, year_span=(lo, hi))


def cumulative_graph(store: CorpusStore, entity_kind: str, up_to: int, inclusive: bool = True) -> CoocGraph:
    """Graph over all documents published up to ``up_to`` (inclusive by default).

    The exclusive form is the strictly-before-t graph used to decide whether a
    combination is new; the inclusive form backs community detection.
    """
    hi = up_to if inclusive else up_to - 1
    lo = min(store.year_index) if store.year_index else hi
    return window_graph(store, entity_kind, lo, hi)


def save_graph(graph: CoocGraph, path) -> None:
    """Graph cache file: json header {entity_kind, year_span, v, N} plus edge list."""
    coo = sparse.triu(graph.adj, k=1).tocoo()
    header = {
        "entity_kind": graph.entity_kind,
        "year_span": list(graph.year_span) if graph.year_span else None,
        "v": graph.n_nodes,
        "N": graph.total_weight,
    }
    names_blob = "\n".join(graph.names)
    with open(path, "wb") as fh:
        np.savez_compressed(
            fh,
            header=np.array(json.dumps(header)),
            names=np.array(names_blob),
            i=coo.row.astype(np.int64),
            j=coo.col.astype(np.int64),
            w=coo.data.astype(np.int64),
        )


def load_graph(path) -> CoocGraph:
    data = np.load(path, allow_pickle=False)
    header = json.loads(str(data["header"]))
    blob = str(data["names"])
    names = tuple(blob.split("\n")) if blob else ()
    counts = {
        (int(i), int(j)): int(w)
        for i, j, w in zip(data["i"], data["j"], data["w"])
    }
    span = tuple(header["year_span"]) if header["year_span"] else None
    graph = _assemble(header["entity_kind"], span, names, counts)
    if graph.total_weight != header["N"] or graph.n_nodes != header["v"]:
        raise ValueError(f"graph cache {path} is inconsistent with its header")
    return graph


@dataclass
class CitationGraph:
    """Directed unweighted document citation graph restricted to in-corpus targets.

    For a document d, ``refs_of`` holds the documents d cites (its parents) and
    ``citers_of`` the documents citing d. Self-citations are dropped with a
    warning count; unresolved references are tallied for coverage reporting.
    """

    ids: tuple[str, ...]
    index: dict[str, int]
    refs_of: list[np.ndarray]
    citers_of: list[np.ndarray]
    resolved_ref_count: np.ndarray
    total_ref_count: np.ndarray
    self_loops_dropped: int = 0
    _ref_sets: list[set[int]] = field(default_factory=list, repr=False)

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    def ref_set(self, i: int) -> set[int]:
        return self._ref_sets[i]

    def in_refs(self, doc_id: str) -> set[str]:
        i = self.index[doc_id]
        return {self.ids[j] for j in self.refs_of[i]}

    def citers(self, doc_id: str) -> set[str]:
        i = self.index[doc_id]
        return {self.ids[j] for j in self.citers_of[i]}


def build_citation_graph(store: CorpusStore) -> CitationGraph:
    ids = tuple(sorted(store.documents))
    index = {doc_id: i for i, doc_id in enumerate(ids)}
    refs_sets: list[set[int]] = [set() for _ in ids]
    citer_sets: list[set[int]] = [set() for _ in ids]
    total = np.zeros(len(ids), dtype=np.int64)
    resolved = np.zeros(len(ids), dtype=np.int64)
    self_loops = 0
    for i, doc_id in enumerate(ids):
        doc = store.documents[doc_id]
        total[i] = len(doc.references)
        for ref in doc.references:
            if ref.ref_id is None:
                continue
            if ref.ref_id == doc_id:
                self_loops += 1
                logger.warning("self-citation %s -> %s dropped", doc_id, doc_id)
                continue
            j = index.get(ref.ref_id)
            if j is None:
                continue
            if j not in refs_sets[i]:
                refs_sets[i].add(j)
                citer_sets[j].add(i)
        resolved[i] = len(refs_sets[i])
    refs_of = [np.fromiter(sorted(s), dtype=np.int64, count=len(s)) for s in refs_sets]
    citers_of = [np.fromiter(sorted(s), dtype=np.int64, count=len(s)) for s in citer_sets]
    return CitationGraph(
        ids=ids,
        index=index,
        refs_of=refs_of,
        citers_of=citers_of,
        resolved_ref_count=resolved,
        total_ref_count=total,
        self_loops_dropped=self_loops,
        _ref_sets=refs_sets,
    )
