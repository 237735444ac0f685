"""Co-occurrence novelty indicators.

Four document scores over entity pair combinations:

* atypicality (``uzzi``): z-score of each observed pair frequency against the
  year-stratified shuffled null model; document score is the 10th percentile
  (novelty) and the median (conventionality) of its pairs' z-scores.
* commonness (``lee``): observed pair frequency over its degree-based
  expectation w*N/(k_i*k_j); document score is -log of the 10th percentile.
* bridging (``foster``): fraction of a document's pairs whose endpoints fall
  in different detected communities of the cumulative graph.
* reuse novelty (``wang``): sum of (1 - co-citation cosine) over the document
  pairs that are new at year t and reused in the forward window.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ._util import percentile, percentile_vector
from .corpus import CorpusStore, docs_in_year
from .errors import NoDocuments, WindowOutOfRange
from .graphs import (
    CoocGraph,
    build_cooc_graph,
    check_entity_kind,
    cumulative_graph,
    extract_combinations,
    window_graph,
    year_graph,
)
from .louvain import CommunityPartition, detect_communities
from .records import ScoreRecord
from .resampling import build_plan, resample_stats

logger = logging.getLogger(__name__)


@dataclass
class ZScoreTable:
    """Per-edge z-scores for a focal year.

    Edges whose resample std is zero while the observed weight equals the
    resample mean score z = 0; edges with zero std but a diverging observed
    weight are excluded from document distributions and counted as degenerate.
    """

    year: int
    entity_kind: str
    sample_count: int
    master_seed: int
    graph: CoocGraph
    z: dict[tuple[int, int], float]
    degenerate: set[tuple[int, int]]


@dataclass
class CommonnessTable:
    year: int
    entity_kind: str
    graph: CoocGraph
    values: dict[tuple[int, int], float]


def _year_docs(store: CorpusStore, t: int):
    docs = docs_in_year(store, t)
    if not docs:
        raise NoDocuments(f"no documents in year {t}")
    return docs


def zscore_table(
    store: CorpusStore,
    entity_kind: str,
    t: int,
    samples: int = 20,
    seed: int = 0,
    threads: int = 1,
) -> ZScoreTable:
    docs = _year_docs(store, t)
    graph = build_cooc_graph(docs, entity_kind, year_span=(t, t))
    plan = build_plan(docs, entity_kind, samples, seed, focal_year=t)
    stats = resample_stats(plan, graph, threads=threads)
    z: dict[tuple[int, int], float] = {}
    degenerate: set[tuple[int, int]] = set()
    for i, j, w in graph.iter_edges():
        m = stats.mean[(i, j)]
        sd = stats.std[(i, j)]
        if sd > 0.0:
            z[(i, j)] = (w - m) / sd
        elif w == m:
            z[(i, j)] = 0.0
        else:
            degenerate.add((i, j))
    return ZScoreTable(
        year=t,
        entity_kind=entity_kind,
        sample_count=samples,
        master_seed=seed,
        graph=graph,
        z=z,
        degenerate=degenerate,
    )


def uzzi_scores(
    store: CorpusStore,
    entity_kind: str,
    t: int,
    samples: int = 20,
    seed: int = 0,
    threads: int = 1,
    keep_distribution: bool = True,
) -> tuple[ZScoreTable, list[ScoreRecord]]:
    """Atypicality scores for every year-t document with at least one pair."""
    check_entity_kind(entity_kind)
    table = zscore_table(store, entity_kind, t, samples=samples, seed=seed, threads=threads)
    params = {"samples": samples, "seed": seed}
    records = []
    for doc in docs_in_year(store, t):
        pairs = extract_combinations(doc, entity_kind).pairs
        if not pairs:
            continue
        z_vals = []
        degenerate = 0
        for pair in sorted(pairs):
            idx = table.graph.pair_index(*pair)
            if idx in table.degenerate:
                degenerate += 1
            else:
                z_vals.append(table.z[idx])
        z_vals.sort()
        if z_vals:
            scores = {"novelty": percentile(z_vals, 10), "conventionality": percentile(z_vals, 50)}
        else:
            scores = {"novelty": None, "conventionality": None}
        records.append(
            ScoreRecord(
                doc_id=doc.id,
                indicator="uzzi",
                entity=entity_kind,
                year=t,
                params=params,
                scores=scores,
                percentiles=percentile_vector(z_vals) if z_vals else None,
                distribution=z_vals if keep_distribution else None,
                meta={"n_pairs": len(pairs), "degenerate_pairs": degenerate},
            )
        )
    return table, records


def commonness_table(store: CorpusStore, entity_kind: str, t: int) -> CommonnessTable:
    docs = _year_docs(store, t)
    graph = build_cooc_graph(docs, entity_kind, year_span=(t, t))
    n_t = graph.total_weight
    values: dict[tuple[int, int], float] = {}
    for i, j, w in graph.iter_edges():
        values[(i, j)] = w * n_t / (int(graph.degrees[i]) * int(graph.degrees[j]))
    return CommonnessTable(year=t, entity_kind=entity_kind, graph=graph, values=values)


def lee_commonness(
    store: CorpusStore,
    entity_kind: str,
    t: int,
    keep_distribution: bool = True,
) -> tuple[CommonnessTable, list[ScoreRecord]]:
    """Commonness scores: -log(P10 of a document's pair commonness values)."""
    check_entity_kind(entity_kind)
    table = commonness_table(store, entity_kind, t)
    records = []
    for doc in docs_in_year(store, t):
        pairs = extract_combinations(doc, entity_kind).pairs
        if not pairs:
            continue
        vals = sorted(table.values[table.graph.pair_index(*p)] for p in pairs)
        score = -math.log(percentile(vals, 10))
        records.append(
            ScoreRecord(
                doc_id=doc.id,
                indicator="lee",
                entity=entity_kind,
                year=t,
                params={},
                scores={"commonness": score},
                percentiles=percentile_vector(vals),
                distribution=vals if keep_distribution else None,
                meta={"n_pairs": len(pairs)},
            )
        )
    return table, records


def foster_bridging(
    store: CorpusStore,
    entity_kind: str,
    t: int,
    resolution: float = 1.0,
    seed: int = 0,
    keep_distribution: bool = True,
) -> tuple[CommunityPartition | None, list[ScoreRecord]]:
    """Bridging scores from communities detected on the cumulative graph up to t."""
    check_entity_kind(entity_kind)
    docs = _year_docs(store, t)
    graph = cumulative_graph(store, entity_kind, t, inclusive=True)
    if graph.n_nodes == 0:
        return None, []
    partition = detect_communities(graph, resolution=resolution, seed=seed)
    params = {"resolution": resolution, "seed": seed}
    records = []
    for doc in docs:
        pairs = extract_combinations(doc, entity_kind).pairs
        if not pairs:
            continue
        vals = sorted(
            0.0 if partition.communities[a] == partition.communities[b] else 1.0
            for a, b in pairs
        )
        score = sum(vals) / len(vals)
        records.append(
            ScoreRecord(
                doc_id=doc.id,
                indicator="foster",
                entity=entity_kind,
                year=t,
                params=params,
                scores={"bridging": score},
                distribution=vals if keep_distribution else None,
                meta={"n_pairs": len(pairs)},
            )
        )
    return partition, records


def _cosine_cache(graph: CoocGraph):
    adj = graph.adj.astype(np.float64).tocsr()
    norms = np.sqrt(np.asarray(adj.multiply(adj).sum(axis=1)).reshape(-1))
    return adj, norms


def wang_windows(
    store: CorpusStore,
    entity_kind: str,
    t: int,
    backward: int,
    forward: int,
    reuse: int,
):
    """Edge sets E_t, E_P, reuse-filtered E_F and the backward profile graph."""
    y0, yn = store.year_span
    if t - 1 < y0:
        raise WindowOutOfRange(f"no documents before focal year {t}")
    if t + 1 > yn:
        raise WindowOutOfRange(f"no documents after focal year {t}")
    if t - backward < y0 or t + forward > yn:
        logger.warning(
            "window [%d, %d] truncated to corpus span [%d, %d]",
            t - backward, t + forward, y0, yn,
        )
    e_t = year_graph(store, entity_kind, t).edge_pairs()
    e_p = window_graph(store, entity_kind, y0, t - 1).edge_pairs()
    future = window_graph(store, entity_kind, t + 1, min(t + forward, yn))
    e_f = {
        (future.names[i], future.names[j])
        for i, j, w in future.iter_edges()
        if w >= reuse
    }
    backward_graph = window_graph(store, entity_kind, max(t - backward, y0), t - 1)
    e_new = (e_t & e_f) - e_p
    return e_new, backward_graph


def wang_novelty(
    store: CorpusStore,
    entity_kind: str,
    t: int,
    backward: int = 3,
    forward: int = 3,
    reuse: int = 1,
    keep_distribution: bool = True,
) -> list[ScoreRecord]:
    """Reuse-conditioned novelty over pairs that are new at t and reused after.

    A pair contributes 1 - cos(profile_i, profile_j) where profiles are rows
    of the backward-window co-occurrence matrix; an all-zero profile means the
    entity is unseen in the window and scores cosine 0 (contribution 1).
    """
    check_entity_kind(entity_kind)
    docs = _year_docs(store, t)
    e_new, b_graph = wang_windows(store, entity_kind, t, backward, forward, reuse)
    adj, norms = _cosine_cache(b_graph)

    contribution: dict[tuple[str, str], float] = {}
    for a, b in sorted(e_new):
        ia = b_graph.node_ids.get(a)
        ib = b_graph.node_ids.get(b)
        if ia is None or ib is None or norms[ia] == 0.0 or norms[ib] == 0.0:
            contribution[(a, b)] = 1.0
            continue
        dot = adj.getrow(ia).multiply(adj.getrow(ib)).sum()
        cos = min(dot / (norms[ia] * norms[ib]), 1.0)
        contribution[(a, b)] = 1.0 - cos

    params = {"backward": backward, "forward": forward, "reuse": reuse}
    records = []
    for doc in docs:
        pairs = extract_combinations(doc, entity_kind).pairs
        if not pairs:
            continue
        vals = sorted(contribution[p] for p in pairs if p in contribution)
        records.append(
            ScoreRecord(
                doc_id=doc.id,
                indicator="wang",
                entity=entity_kind,
                year=t,
                params=params,
                scores={"novelty": float(sum(vals))},
                distribution=vals if keep_distribution else None,
                meta={"n_pairs": len(pairs), "n_new_reused": len(vals)},
            )
        )
    return records
