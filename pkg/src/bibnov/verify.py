"""Engine-vs-oracle comparison used by the verify CLI command and the test suite."""

from __future__ import annotations

import math

from .cooc_novelty import foster_bridging, lee_commonness, uzzi_scores, wang_novelty
from .corpus import CorpusStore
from .disruption import disruption_run
from .errors import WindowOutOfRange
from .oracle import (
    OracleResult,
    oracle_disruption,
    oracle_foster,
    oracle_lee,
    oracle_semantic,
    oracle_uzzi,
    oracle_wang,
)
from .records import ScoreRecord
from .semantic import EmbeddingStore, semantic_scores

REL_TOL = 1e-9
ABS_TOL = 1e-12


def _close(a: float, b: float, rel_tol: float, abs_tol: float) -> bool:
    return abs(a - b) <= max(abs_tol, rel_tol * max(abs(a), abs(b)))


def compare_scores(
    records: list[ScoreRecord],
    result: OracleResult,
    rel_tol: float = REL_TOL,
    abs_tol: float = ABS_TOL,
) -> tuple[bool, float, list[str]]:
    """Returns (ok, max relative difference, human-readable issues)."""
    engine = {r.doc_id: r.scores for r in records}
    issues: list[str] = []
    max_diff = 0.0
    if engine.keys() != result.scores.keys():
        only_engine = sorted(engine.keys() - result.scores.keys())
        only_oracle = sorted(result.scores.keys() - engine.keys())
        if only_engine:
            issues.append(f"docs only scored by engine: {only_engine[:5]}")
        if only_oracle:
            issues.append(f"docs only scored by oracle: {only_oracle[:5]}")
    for doc_id in sorted(engine.keys() & result.scores.keys()):
        left = engine[doc_id]
        right = result.scores[doc_id]
        for name in sorted(left.keys() & right.keys()):
            a, b = left[name], right[name]
            if a is None and b is None:
                continue
            if a is None or b is None:
                issues.append(f"{doc_id}.{name}: {a} vs {b}")
                continue
            # Floor the denominator so float noise around zero does not read
            # as a large relative difference.
            denom = max(abs(a), abs(b), 1e-9)
            max_diff = max(max_diff, abs(a - b) / denom)
            if not _close(a, b, rel_tol, abs_tol):
                issues.append(f"{doc_id}.{name}: {a!r} vs {b!r}")
        missing = sorted(left.keys() ^ right.keys())
        if missing:
            issues.append(f"{doc_id}: score names differ: {missing}")
    return (not issues, max_diff, issues)


def run_verification(
    store: CorpusStore,
    entity_kind: str,
    year: int,
    samples: int = 20,
    seed: int = 0,
    embeddings: EmbeddingStore | None = None,
    q: float = 10,
) -> list[tuple[str, int, float, bool]]:
    """Run every applicable indicator both ways; returns (name, docs, max diff, ok) rows."""
    results = []

    _, records = lee_commonness(store, entity_kind, year)
    ok, diff, _ = compare_scores(records, oracle_lee(store, entity_kind, year))
    results.append(("lee", len(records), diff, ok))

    _, records = uzzi_scores(store, entity_kind, year, samples=samples, seed=seed)
    # Implementation equivalence recounts the engine's own sampled worlds
    # (enumeration_limit=0); enumeration-based exactness is checked separately
    # against resample_stats at statistical tolerances.
    ok, diff, _ = compare_scores(
        records,
        oracle_uzzi(store, entity_kind, year, samples=samples, seed=seed, enumeration_limit=0),
    )
    results.append(("uzzi", len(records), diff, ok))

    partition, records = foster_bridging(store, entity_kind, year)
    communities = partition.communities if partition else {}
    ok, diff, _ = compare_scores(records, oracle_foster(store, entity_kind, year, communities))
    results.append(("foster", len(records), diff, ok))

    try:
        records = wang_novelty(store, entity_kind, year)
        ok, diff, _ = compare_scores(records, oracle_wang(store, entity_kind, year, 3, 3, 1))
        results.append(("wang", len(records), diff, ok))
    except WindowOutOfRange:
        results.append(("wang", 0, math.nan, True))

    if embeddings is not None:
        records, _skipped = semantic_scores(store, embeddings, field="title", q=q, year=year)
        ok, diff, _ = compare_scores(
            records, oracle_semantic(store, embeddings, "title", q, year=year)
        )
        results.append(("shibayama", len(records), diff, ok))

    records = disruption_run(store, year=year)
    ok, diff, _ = compare_scores(records, oracle_disruption(store, (1, 5), year=year))
    results.append(("disruption", len(records), diff, ok))
    return results
