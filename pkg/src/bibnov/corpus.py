"""Document corpus ingestion and storage.

Input is UTF-8 line-delimited JSON, one document per line:

    {"id": "p1", "year": 2004,
     "references": [{"ref_id": "p0", "source": "J Neuro", "year": 2001}],
     "keywords": ["mesh term"],
     "title_vector_id": "tv-p1", "abstract_vector_id": "av-p1"}

A binary columnar cache can sit beside the text input; it is keyed by the
input file digest plus the parse configuration and is rebuilt on mismatch.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from ._util import normalize_token, sha256_file
from .errors import (
    EmptyRecord,
    IoFailure,
    MalformedRecord,
    MalformedYear,
    MissingField,
    NoValidRecords,
)

logger = logging.getLogger(__name__)

CACHE_SUFFIX = ".colcache.npz"
_CACHE_VERSION = 1


@dataclass(frozen=True)
class ParseConfig:
    """Normalization and sanity rules applied at parse time.

    ``max_ref_year_lead`` is the number of years a reference may post-date its
    citing document (in-press citations); larger leads are clamped to the
    citing year with a warning.
    """

    casefold: bool = True
    max_ref_year_lead: int = 1

    def key(self) -> str:
        return f"casefold={int(self.casefold)};lead={self.max_ref_year_lead}"


@dataclass(frozen=True)
class ReferenceEntry:
    """One cited work: an in-corpus id, a venue string, a publication year, or any mix."""

    ref_id: str | None = None
    source: str | None = None
    year: int | None = None


@dataclass(frozen=True)
class DocumentRecord:
    id: str
    year: int
    references: tuple[ReferenceEntry, ...] = ()
    keywords: tuple[str, ...] = ()
    title_vector_id: str | None = None
    abstract_vector_id: str | None = None


@dataclass
class CorpusStore:
    """Id-indexed documents plus the year partition.

    ``year_index`` maps each year to the lexicographically sorted ids published
    that year; every accepted document appears in exactly one bucket.
    """

    documents: dict[str, DocumentRecord]
    year_index: dict[int, list[str]]
    provenance: dict = field(default_factory=dict)
    warnings: Counter = field(default_factory=Counter)

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def year_span(self) -> tuple[int, int]:
        if not self.year_index:
            raise NoValidRecords("empty corpus has no year span")
        years = self.year_index.keys()
        return min(years), max(years)

    def years(self) -> list[int]:
        return sorted(self.year_index)


def _coerce_year(value, error: type[Exception]):
    if isinstance(value, bool):
        raise error(f"not a year: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise error(f"not a year: {value!r}")


def parse_document(
    raw: dict,
    config: ParseConfig = ParseConfig(),
    on_warning: Callable[[str], None] | None = None,
) -> DocumentRecord:
    """Validate and normalize one raw record.

    Raises MissingField, MalformedYear, MalformedRecord for fatal per-record
    problems and EmptyRecord when the document has neither references nor
    keywords. Non-fatal issues (dropped reference entries, clamped years) are
    reported through ``on_warning`` with a category string.
    """
    warn = on_warning or (lambda category: logger.debug("parse warning: %s", category))
    if not isinstance(raw, dict):
        raise MalformedRecord(f"expected object, got {type(raw).__name__}")

    doc_id = raw.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise MissingField("id")
    if "year" not in raw or raw["year"] is None:
        raise MissingField("year")
    year = _coerce_year(raw["year"], MalformedYear)

    references: list[ReferenceEntry] = []
    raw_refs = raw.get("references") or []
    if not isinstance(raw_refs, list):
        raise MalformedRecord(f"{doc_id}: references must be a list")
    for entry in raw_refs:
        if not isinstance(entry, dict):
            warn("reference_dropped")
            continue
        ref_id = entry.get("ref_id")
        source = entry.get("source")
        ref_year = entry.get("year")
        if ref_id is not None and not isinstance(ref_id, str):
            warn("reference_dropped")
            continue
        if source is not None:
            if not isinstance(source, str):
                warn("reference_dropped")
                continue
            source = normalize_token(source, config.casefold) or None
        if ref_id is None and source is None:
            warn("reference_dropped")
            continue
        if ref_year is not None:
            try:
                ref_year = _coerce_year(ref_year, MalformedYear)
            except MalformedYear:
                warn("reference_year_dropped")
                ref_year = None
        if ref_year is not None and ref_year > year + config.max_ref_year_lead:
            warn("reference_year_clamped")
            ref_year = year
        references.append(ReferenceEntry(ref_id=ref_id, source=source, year=ref_year))

    keywords: list[str] = []
    seen: set[str] = set()
    raw_kws = raw.get("keywords") or []
    if not isinstance(raw_kws, list):
        raise MalformedRecord(f"{doc_id}: keywords must be a list")
    for kw in raw_kws:
        if not isinstance(kw, str):
            warn("keyword_dropped")
            continue
        kw = normalize_token(kw, config.casefold)
        if kw and kw not in seen:
            seen.add(kw)
            keywords.append(kw)

    if not references and not keywords:
        raise EmptyRecord(doc_id)

    def _opt_str(key: str) -> str | None:
        v = raw.get(key)
        return v if isinstance(v, str) and v else None

    return DocumentRecord(
        id=doc_id,
        year=year,
        references=tuple(references),
        keywords=tuple(keywords),
        title_vector_id=_opt_str("title_vector_id"),
        abstract_vector_id=_opt_str("abstract_vector_id"),
    )


def _parse_lines(path: Path, config: ParseConfig, warnings: Counter) -> dict[str, DocumentRecord]:
    records: dict[str, DocumentRecord] = {}
    warn = lambda category: warnings.update([category])  # noqa: E731
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError:
                warnings.update(["bad_json"])
                logger.warning("%s:%d: unparseable line skipped", path, lineno)
                continue
            try:
                doc = parse_document(raw, config, warn)
            except MissingField as exc:
                warnings.update([f"missing_{exc.field}"])
                continue
            except MalformedYear:
                warnings.update(["malformed_year"])
                continue
            except MalformedRecord:
                warnings.update(["malformed_record"])
                continue
            except EmptyRecord:
                warnings.update(["empty_record"])
                logger.warning("%s:%d: record has no references and no keywords, skipped", path, lineno)
                continue
            if doc.id in records:
                warnings.update(["duplicate_id"])
                logger.warning("duplicate id %s: last record wins", doc.id)
            records[doc.id] = doc
    return records


def _build_store(
    records: Iterable[DocumentRecord],
    year_range: tuple[int, int] | None,
    provenance: dict,
    warnings: Counter,
) -> CorpusStore:
    documents: dict[str, DocumentRecord] = {}
    for doc in records:
        if year_range is not None and not (year_range[0] <= doc.year <= year_range[1]):
            continue
        documents[doc.id] = doc
    if not documents:
        raise NoValidRecords(provenance.get("input", "<corpus>"))
    year_index: dict[int, list[str]] = {}
    for doc_id in sorted(documents):
        year_index.setdefault(documents[doc_id].year, []).append(doc_id)
    year_index = dict(sorted(year_index.items()))
    return CorpusStore(documents=documents, year_index=year_index, provenance=provenance, warnings=warnings)


def load_corpus(
    path,
    year_range: tuple[int, int] | None = None,
    config: ParseConfig = ParseConfig(),
    use_cache: bool = False,
) -> CorpusStore:
    """Load a line-delimited corpus file, optionally restricted to [lo, hi] years.

    With ``use_cache`` a columnar cache is read from (or written to)
    ``<path>.colcache.npz``; a digest mismatch silently rebuilds it.
    """
    path = Path(path)
    if not path.is_file():
        raise IoFailure(f"no such corpus file: {path}")
    digest = sha256_file(path)
    provenance = {
        "input": str(path),
        "sha256": digest,
        "config": config.key(),
        "year_range": list(year_range) if year_range else None,
        "cache_used": False,
    }

    records: list[DocumentRecord] | None = None
    warnings = Counter()
    cache_path = path.with_name(path.name + CACHE_SUFFIX)
    if use_cache:
        cached = _load_cache(cache_path, digest, config)
        if cached is not None:
            records, warnings = cached
            provenance["cache_used"] = True
    if records is None:
        parsed = _parse_lines(path, config, warnings)
        records = list(parsed.values())
        if use_cache and records:
            try:
                _save_cache(cache_path, records, digest, config, warnings)
            except OSError as exc:
                logger.warning("cache write failed (%s); continuing without cache", exc)
    return _build_store(records, year_range, provenance, warnings)


def docs_in_year(store: CorpusStore, t: int) -> list[DocumentRecord]:
    """Documents published in year t, ordered lexicographically by id.

    This ordering is the deterministic iteration contract used everywhere
    (resampling slot order, score record order).
    """
    return [store.documents[doc_id] for doc_id in store.year_index.get(t, [])]


# --- columnar cache -----------------------------------------------------------
#
# Strings are stored as a single UTF-8 blob plus an int64 offset table; optional
# strings add an int8 presence mask. Reference rows are flattened with a
# per-document offset table, keywords likewise.


def _offsets(lengths: list[int]) -> np.ndarray:
    out = np.zeros(len(lengths) + 1, dtype=np.int64)
    if lengths:
        out[1:] = np.cumsum(lengths)
    return out


def _pack_strings(values: list[str | None]):
    mask = np.fromiter((v is not None for v in values), dtype=np.int8, count=len(values))
    encoded = [v.encode("utf-8") if v is not None else b"" for v in values]
    offsets = _offsets([len(b) for b in encoded])
    blob = np.frombuffer(b"".join(encoded), dtype=np.uint8).copy()
    return blob, offsets, mask


def _unpack_strings(blob: np.ndarray, offsets: np.ndarray, mask: np.ndarray) -> list[str | None]:
    raw = blob.tobytes()
    out: list[str | None] = []
    for i in range(len(offsets) - 1):
        if mask[i]:
            out.append(raw[offsets[i]:offsets[i + 1]].decode("utf-8"))
        else:
            out.append(None)
    return out


def _save_cache(cache_path: Path, records: list[DocumentRecord], digest: str, config: ParseConfig, warnings: Counter) -> None:
    ids = [d.id for d in records]
    years = np.array([d.year for d in records], dtype=np.int32)

    ref_doc_off = _offsets([len(d.references) for d in records])
    refs = [r for d in records for r in d.references]
    kw_doc_off = _offsets([len(d.keywords) for d in records])
    kws = [k for d in records for k in d.keywords]

    ref_years = np.array([r.year if r.year is not None else 0 for r in refs], dtype=np.int32)
    ref_year_mask = np.array([r.year is not None for r in refs], dtype=np.int8)

    header = {
        "version": _CACHE_VERSION,
        "sha256": digest,
        "config": config.key(),
        "n_docs": len(records),
        "warnings": dict(warnings),
    }
    arrays = {"header": np.array(json.dumps(header)), "years": years,
              "ref_doc_off": ref_doc_off, "kw_doc_off": kw_doc_off,
              "ref_years": ref_years, "ref_year_mask": ref_year_mask}
    for name, values in (
        ("ids", ids),
        ("ref_ids", [r.ref_id for r in refs]),
        ("ref_sources", [r.source for r in refs]),
        ("kws", kws),
        ("tv", [d.title_vector_id for d in records]),
        ("av", [d.abstract_vector_id for d in records]),
    ):
        blob, off, mask = _pack_strings(values)
        arrays[f"{name}_blob"], arrays[f"{name}_off"], arrays[f"{name}_mask"] = blob, off, mask
    with open(cache_path, "wb") as fh:
        np.savez_compressed(fh, **arrays)


def _load_cache(cache_path: Path, digest: str, config: ParseConfig):
    if not cache_path.is_file():
        return None
    try:
        data = np.load(cache_path, allow_pickle=False)
        header = json.loads(str(data["header"]))
    except Exception:
        logger.warning("unreadable cache %s ignored", cache_path)
        return None
    if header.get("version") != _CACHE_VERSION or header.get("sha256") != digest or header.get("config") != config.key():
        return None

    cols = {}
    for name in ("ids", "ref_ids", "ref_sources", "kws", "tv", "av"):
        cols[name] = _unpack_strings(data[f"{name}_blob"], data[f"{name}_off"], data[f"{name}_mask"])
    years = data["years"]
    ref_doc_off = data["ref_doc_off"]
    kw_doc_off = data["kw_doc_off"]
    ref_years = data["ref_years"]
    ref_year_mask = data["ref_year_mask"]

    records: list[DocumentRecord] = []
    for i in range(header["n_docs"]):
        refs = tuple(
            ReferenceEntry(
                ref_id=cols["ref_ids"][j],
                source=cols["ref_sources"][j],
                year=int(ref_years[j]) if ref_year_mask[j] else None,
            )
            for j in range(ref_doc_off[i], ref_doc_off[i + 1])
        )
        records.append(
            DocumentRecord(
                id=cols["ids"][i],
                year=int(years[i]),
                references=refs,
                keywords=tuple(cols["kws"][j] for j in range(kw_doc_off[i], kw_doc_off[i + 1])),
                title_vector_id=cols["tv"][i],
                abstract_vector_id=cols["av"][i],
            )
        )
    return records, Counter(header.get("warnings", {}))
