"""Semantic novelty from precomputed document embedding vectors.

A document's references are mapped to dense vectors (title or abstract); all
pairwise cosine distances between them form a distribution whose q-th
percentile is the score. Embedding generation itself happens upstream; this
module only consumes vectors.

Embedding files are line-delimited ``{"id": ..., "vector": [...]}`` records.
An optional packed binary cache (magic header, dimension, fixed-width id and
vector records) loads much faster for repeated runs.
"""

from __future__ import annotations

import json
import logging
import struct
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from ._util import percentile, percentile_vector
from .corpus import CorpusStore, DocumentRecord, docs_in_year
from .errors import (
    DimensionMismatch,
    DuplicateId,
    InsufficientReferences,
    IoFailure,
    MalformedRecord,
)
from .records import ScoreRecord

logger = logging.getLogger(__name__)

_MAGIC = b"BNEMB001"
EMBED_FIELDS = ("title", "abstract")


@dataclass
class EmbeddingStore:
    """Uniform-dimension dense vectors keyed by vector id."""

    dimension: int
    vectors: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, vector_id: str | None) -> np.ndarray | None:
        if vector_id is None:
            return None
        return self.vectors.get(vector_id)


def load_embeddings(path) -> EmbeddingStore:
    """Load a jsonl embedding file or a packed binary cache (detected by magic)."""
    path = Path(path)
    if not path.is_file():
        raise IoFailure(f"no such embedding file: {path}")
    with open(path, "rb") as fh:
        head = fh.read(len(_MAGIC))
    if head == _MAGIC:
        return _load_packed(path)
    return _load_jsonl(path)


def _load_jsonl(path: Path) -> EmbeddingStore:
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"{path}:{lineno}: {exc}") from exc
            vec_id = raw.get("id")
            vec = raw.get("vector")
            if not isinstance(vec_id, str) or not isinstance(vec, list):
                raise MalformedRecord(f"{path}:{lineno}: expected id and vector")
            arr = np.asarray(vec, dtype=np.float64)
            if not np.all(np.isfinite(arr)):
                raise MalformedRecord(f"{path}:{lineno}: non-finite vector for {vec_id}")
            if dim is None:
                dim = arr.shape[0]
            elif arr.shape[0] != dim:
                raise DimensionMismatch(f"{vec_id} has dimension {arr.shape[0]}, expected {dim}")
            if vec_id in vectors:
                raise DuplicateId(vec_id)
            vectors[vec_id] = arr
    return EmbeddingStore(dimension=dim or 0, vectors=vectors)


def save_packed(store: EmbeddingStore, path) -> Path:
    """Write the binary cache: magic, dim, count, id width, padded ids, float64 matrix."""
    path = Path(path)
    ids = sorted(store.vectors)
    id_width = max((len(i.encode("utf-8")) for i in ids), default=1)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IQI", store.dimension, len(ids), id_width))
        for vec_id in ids:
            fh.write(vec_id.encode("utf-8").ljust(id_width, b"\x00"))
        if ids:
            matrix = np.stack([store.vectors[i] for i in ids]).astype("<f8")
            fh.write(matrix.tobytes())
    return path


def _load_packed(path: Path) -> EmbeddingStore:
    with open(path, "rb") as fh:
        blob = fh.read()
    offset = len(_MAGIC)
    dim, count, id_width = struct.unpack_from("<IQI", blob, offset)
    offset += struct.calcsize("<IQI")
    ids = []
    for _ in range(count):
        ids.append(blob[offset:offset + id_width].rstrip(b"\x00").decode("utf-8"))
        offset += id_width
    matrix = np.frombuffer(blob, dtype="<f8", count=count * dim, offset=offset).reshape(count, dim)
    return EmbeddingStore(dimension=dim, vectors={i: matrix[k].copy() for k, i in enumerate(ids)})


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - cos(u, v) in [0, 2]; a zero-norm vector scores cosine 0 (distance 1)."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(f"{u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 1.0
    cos = float(np.dot(u, v)) / (nu * nv)
    return 1.0 - max(-1.0, min(1.0, cos))


def _reference_vectors(
    doc: DocumentRecord, store: CorpusStore, embeddings: EmbeddingStore, field: str
) -> list[np.ndarray]:
    if field not in EMBED_FIELDS:
        raise ValueError(f"field must be one of {EMBED_FIELDS}, got {field!r}")
    attr = "title_vector_id" if field == "title" else "abstract_vector_id"
    vectors = []
    for ref in doc.references:
        if ref.ref_id is None:
            continue
        cited = store.documents.get(ref.ref_id)
        if cited is None:
            continue
        vec = embeddings.get(getattr(cited, attr))
        if vec is not None:
            vectors.append(vec)
    return vectors


def semantic_novelty(
    doc: DocumentRecord,
    store: CorpusStore,
    embeddings: EmbeddingStore,
    field: str = "title",
    q: float = 10,
    keep_distribution: bool = True,
) -> ScoreRecord:
    """Score one document; raises InsufficientReferences below two resolved vectors."""
    vectors = _reference_vectors(doc, store, embeddings, field)
    if len(vectors) < 2:
        raise InsufficientReferences(
            f"{doc.id}: {len(vectors)} reference vector(s) resolve, need at least 2"
        )
    distances = sorted(cosine_distance(u, v) for u, v in combinations(vectors, 2))
    coverage = len(vectors) / len(doc.references) if doc.references else 0.0
    return ScoreRecord(
        doc_id=doc.id,
        indicator="shibayama",
        entity=field,
        year=doc.year,
        params={"q": q},
        scores={"novelty": percentile(distances, q)},
        percentiles=percentile_vector(distances),
        distribution=distances if keep_distribution else None,
        meta={"n_vectors": len(vectors), "coverage": coverage},
    )


def semantic_scores(
    store: CorpusStore,
    embeddings: EmbeddingStore,
    field: str = "title",
    q: float = 10,
    year: int | None = None,
    keep_distribution: bool = True,
) -> tuple[list[ScoreRecord], int]:
    """Score all documents (or one year); returns (records, skipped count)."""
    if year is not None:
        docs = docs_in_year(store, year)
    else:
        docs = [store.documents[i] for i in sorted(store.documents)]
    records = []
    skipped = 0
    for doc in docs:
        try:
            records.append(
                semantic_novelty(doc, store, embeddings, field=field, q=q, keep_distribution=keep_distribution)
            )
        except InsufficientReferences:
            skipped += 1
    if skipped:
        logger.info("semantic novelty skipped %d document(s) with <2 resolved vectors", skipped)
    return records, skipped
