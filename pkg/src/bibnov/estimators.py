"""Scikit-learn style estimators over the indicator core.

Each estimator takes its parameters in ``__init__`` (so ``get_params`` /
``set_params`` / ``clone`` work), learns the year-level structures in
``fit(corpus)`` and tabulates per-document scores in ``transform``. The
natural call is ``fit_transform(corpus)``; ``transform`` accepts None (reuse
the fitted corpus) or the same corpus object. ``corpus`` may be a
CorpusStore, a corpus file path, or an iterable of DocumentRecord.
"""

from __future__ import annotations

import pandas as pd
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cooc_novelty import foster_bridging, lee_commonness, uzzi_scores, wang_novelty
from .disruption import ALL_MEASURES, disruption_run
from .errors import InvalidParams
from .records import ScoreRecord
from .semantic import load_embeddings, semantic_scores
from .validation import as_corpus, require_entity_kind, require_positive_int, require_year


def records_frame(records: list[ScoreRecord]) -> pd.DataFrame:
    """Flatten score records into a doc-per-row table (scores then meta columns)."""
    rows = []
    for rec in sorted(records, key=lambda r: r.doc_id):
        row: dict = {"doc_id": rec.doc_id, "year": rec.year}
        row.update(rec.scores)
        row.update(rec.meta)
        rows.append(row)
    return pd.DataFrame(rows)


class _RecordsEstimator(BaseEstimator, TransformerMixin):
    """Shared fit/transform plumbing; subclasses implement _compute."""

    def fit(self, X, y=None):
        corpus = as_corpus(X)
        self.corpus_ = corpus
        self.records_ = self._compute(corpus)
        return self

    def transform(self, X=None) -> pd.DataFrame:
        check_is_fitted(self, "records_")
        if X is not None and as_corpus(X) is not self.corpus_:
            raise InvalidParams(
                "transform expects the fitted corpus (or None); refit for a new corpus"
            )
        return records_frame(self.records_)

    def fit_transform(self, X, y=None, **fit_params) -> pd.DataFrame:
        return self.fit(X, y).transform(None)

    def _compute(self, corpus) -> list[ScoreRecord]:
        raise NotImplementedError


class Atypicality(_RecordsEstimator):
    """Z-score atypicality against the year-stratified shuffled null model.

    Columns: novelty (P10 of the document's pair z-scores) and conventionality
    (P50), both None when every pair is degenerate.
    """

    def __init__(self, entity_kind="journals", year=None, samples=20, seed=0, threads=1):
        self.entity_kind = entity_kind
        self.year = year
        self.samples = samples
        self.seed = seed
        self.threads = threads

    def _compute(self, corpus):
        require_entity_kind(self.entity_kind)
        require_positive_int(self.samples, "samples")
        self.table_, records = uzzi_scores(
            corpus,
            self.entity_kind,
            require_year(self.year),
            samples=self.samples,
            seed=self.seed,
            threads=self.threads,
        )
        return records


class Commonness(_RecordsEstimator):
    """Observed-over-expected pair frequency; score is -log(P10)."""

    def __init__(self, entity_kind="journals", year=None):
        self.entity_kind = entity_kind
        self.year = year

    def _compute(self, corpus):
        require_entity_kind(self.entity_kind)
        self.table_, records = lee_commonness(corpus, self.entity_kind, require_year(self.year))
        return records


class Bridging(_RecordsEstimator):
    """Fraction of a document's pairs spanning different detected communities."""

    def __init__(self, entity_kind="journals", year=None, resolution=1.0, seed=0):
        self.entity_kind = entity_kind
        self.year = year
        self.resolution = resolution
        self.seed = seed

    def _compute(self, corpus):
        require_entity_kind(self.entity_kind)
        self.partition_, records = foster_bridging(
            corpus,
            self.entity_kind,
            require_year(self.year),
            resolution=self.resolution,
            seed=self.seed,
        )
        return records


class ReuseNovelty(_RecordsEstimator):
    """Sum of (1 - co-citation cosine) over pairs new at t and reused within f years."""

    def __init__(self, entity_kind="journals", year=None, backward=3, forward=3, reuse=1):
        self.entity_kind = entity_kind
        self.year = year
        self.backward = backward
        self.forward = forward
        self.reuse = reuse

    def _compute(self, corpus):
        require_entity_kind(self.entity_kind)
        require_positive_int(self.backward, "backward")
        require_positive_int(self.forward, "forward")
        require_positive_int(self.reuse, "reuse")
        return wang_novelty(
            corpus,
            self.entity_kind,
            require_year(self.year),
            backward=self.backward,
            forward=self.forward,
            reuse=self.reuse,
        )


class SemanticNovelty(_RecordsEstimator):
    """Percentile of pairwise cosine distances among reference embeddings."""

    def __init__(self, embeddings=None, field="title", q=10, year=None):
        self.embeddings = embeddings
        self.field = field
        self.q = q
        self.year = year

    def _compute(self, corpus):
        if self.embeddings is None:
            raise InvalidParams("missing required param: embeddings")
        store = self.embeddings
        if isinstance(store, (str, bytes)) or hasattr(store, "__fspath__"):
            store = load_embeddings(store)
        records, self.skipped_ = semantic_scores(
            corpus, store, field=self.field, q=self.q, year=self.year
        )
        return records


class DisruptionScores(_RecordsEstimator):
    """Citer-classification measures: di_l, dinok_l, depth, breadth, dependence, independence."""

    def __init__(self, year=None, measures=ALL_MEASURES, threads=1):
        self.year = year
        self.measures = measures
        self.threads = threads

    def _compute(self, corpus):
        return disruption_run(
            corpus, year=self.year, measures=tuple(self.measures), threads=self.threads
        )
