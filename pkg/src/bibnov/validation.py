"""Input validation helpers shared by the estimator facade and the CLI."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .corpus import CorpusStore, DocumentRecord, load_corpus
from .errors import InvalidParams
from .graphs import ENTITY_KINDS


def as_corpus(X) -> CorpusStore:
    """Accept a CorpusStore, a corpus file path, or an iterable of DocumentRecord."""
    if isinstance(X, CorpusStore):
        return X
    if isinstance(X, (str, Path)):
        return load_corpus(X)
    if isinstance(X, Iterable):
        docs = list(X)
        if not all(isinstance(d, DocumentRecord) for d in docs):
            raise InvalidParams("expected DocumentRecord items")
        documents = {d.id: d for d in docs}
        year_index: dict[int, list[str]] = {}
        for doc_id in sorted(documents):
            year_index.setdefault(documents[doc_id].year, []).append(doc_id)
        return CorpusStore(documents=documents, year_index=dict(sorted(year_index.items())))
    raise InvalidParams(f"cannot interpret {type(X).__name__} as a corpus")


def require_year(year) -> int:
    if year is None:
        raise InvalidParams("missing required param: year")
    if not isinstance(year, int) or isinstance(year, bool):
        raise InvalidParams(f"year must be an integer, got {year!r}")
    return year


def require_entity_kind(entity_kind: str) -> str:
    if entity_kind not in ENTITY_KINDS:
        raise InvalidParams(f"entity_kind must be one of {ENTITY_KINDS}, got {entity_kind!r}")
    return entity_kind


def require_positive_int(value, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise InvalidParams(f"{name} must be a positive integer, got {value!r}")
    return value
