"""Synthetic corpus generation with planted structure.

Documents get a home cluster; keywords and cited journals are drawn mostly
from the cluster's entity pool, citations follow preferential attachment over
strictly earlier documents, and out-of-corpus references age geometrically.
Embedding vectors sit near their cluster centroid. Everything is driven by a
single seeded generator, so a given parameter set always produces identical
files; planted labels go to a ground-truth sidecar for diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidParams


@dataclass(frozen=True)
class SynthParams:
    n_docs: int
    n_entities: int = 40
    years: tuple[int, int] = (2000, 2009)
    seed: int = 0
    n_clusters: int = 4
    refs_range: tuple[int, int] = (3, 10)
    keywords_range: tuple[int, int] = (2, 6)
    p_in_cluster: float = 0.8
    p_in_corpus: float = 0.6
    ref_age_p: float = 0.35
    embed_dim: int = 16
    embed_noise: float = 0.4
    with_embeddings: bool = True

    def validate(self) -> "SynthParams":
        if self.n_docs < 1:
            raise InvalidParams("n_docs must be >= 1")
        if self.n_entities < 1:
            raise InvalidParams("n_entities must be >= 1")
        if self.years[0] > self.years[1]:
            raise InvalidParams("years must be [lo, hi] with lo <= hi")
        if self.n_clusters < 1:
            raise InvalidParams("n_clusters must be >= 1")
        if not (0 <= self.refs_range[0] <= self.refs_range[1]):
            raise InvalidParams("refs_range must be 0 <= lo <= hi")
        if not (0 <= self.keywords_range[0] <= self.keywords_range[1]):
            raise InvalidParams("keywords_range must be 0 <= lo <= hi")
        for name in ("p_in_cluster", "p_in_corpus"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidParams(f"{name} must be in [0, 1]")
        if not 0.0 < self.ref_age_p <= 1.0:
            raise InvalidParams("ref_age_p must be in (0, 1]")
        if self.embed_dim < 1:
            raise InvalidParams("embed_dim must be >= 1")
        return self


def _doc_id(i: int, width: int) -> str:
    return f"d{i:0{width}d}"


def synth_corpus(
    params: SynthParams,
    out_path,
    embeddings_path=None,
    truth_path=None,
) -> dict:
    """Write corpus, embeddings and ground-truth files; returns a summary dict."""
    params.validate()
    out_path = Path(out_path)
    embeddings_path = Path(embeddings_path) if embeddings_path else out_path.with_suffix(".embeddings.jsonl")
    truth_path = Path(truth_path) if truth_path else out_path.with_suffix(".truth.json")

    # Separate streams keep the corpus structure invariant to embedding params.
    rng = np.random.default_rng(np.random.SeedSequence([params.seed, 0]))
    rng_embed = np.random.default_rng(np.random.SeedSequence([params.seed, 1]))
    n = params.n_docs
    width = max(4, len(str(n - 1)))
    lo, hi = params.years
    n_years = hi - lo + 1

    journals = [f"journal-{k:03d}" for k in range(params.n_entities)]
    topics = [f"topic-{k:03d}" for k in range(params.n_entities)]
    n_clusters = min(params.n_clusters, params.n_entities)  # no empty cluster pools
    entity_cluster = {k: k % n_clusters for k in range(params.n_entities)}
    cluster_pool = [
        [k for k in range(params.n_entities) if entity_cluster[k] == c]
        for c in range(n_clusters)
    ]
    centers = rng_embed.normal(size=(n_clusters, params.embed_dim))

    years = [lo + (i * n_years) // n for i in range(n)]
    doc_cluster = rng.integers(0, n_clusters, size=n)
    home_journal = np.array(
        [cluster_pool[c][int(rng.integers(0, len(cluster_pool[c])))] for c in doc_cluster]
    )

    def pick_entity(cluster: int) -> int:
        if rng.random() < params.p_in_cluster:
            pool = cluster_pool[cluster]
            return pool[int(rng.integers(0, len(pool)))]
        return int(rng.integers(0, params.n_entities))

    pa_pool: list[int] = []      # one base entry per published doc + one per citation
    published_until = 0          # docs with index < published_until are citable
    citations = np.zeros(n, dtype=np.int64)

    corpus_lines: list[str] = []
    embed_lines: list[str] = []
    for i in range(n):
        year = years[i]
        while published_until < n and years[published_until] < year:
            pa_pool.append(published_until)
            published_until += 1
        cluster = int(doc_cluster[i])
        doc_id = _doc_id(i, width)

        refs = []
        n_refs = int(rng.integers(params.refs_range[0], params.refs_range[1] + 1))
        for _ in range(n_refs):
            if pa_pool and rng.random() < params.p_in_corpus:
                target = pa_pool[int(rng.integers(0, len(pa_pool)))]
                pa_pool.append(target)
                citations[target] += 1
                refs.append(
                    {
                        "ref_id": _doc_id(target, width),
                        "source": journals[int(home_journal[target])],
                        "year": years[target],
                    }
                )
            else:
                age = int(rng.geometric(params.ref_age_p))
                refs.append(
                    {"source": journals[pick_entity(cluster)], "year": year - age}
                )

        n_kw = int(rng.integers(params.keywords_range[0], params.keywords_range[1] + 1))
        kws: list[str] = []
        for _ in range(n_kw):
            kw = topics[pick_entity(cluster)]
            if kw not in kws:
                kws.append(kw)

        record = {
            "id": doc_id,
            "year": year,
            "references": refs,
            "keywords": kws,
            "title_vector_id": f"tv-{doc_id}",
            "abstract_vector_id": f"av-{doc_id}",
        }
        corpus_lines.append(json.dumps(record, ensure_ascii=True, separators=(",", ":")))

        if params.with_embeddings:
            for prefix in ("tv", "av"):
                vec = centers[cluster] + params.embed_noise * rng_embed.normal(size=params.embed_dim)
                embed_lines.append(
                    json.dumps(
                        {"id": f"{prefix}-{doc_id}", "vector": [round(float(x), 6) for x in vec]},
                        ensure_ascii=True,
                        separators=(",", ":"),
                    )
                )

    out_path.write_text("\n".join(corpus_lines) + "\n", encoding="utf-8")
    if params.with_embeddings:
        embeddings_path.write_text("\n".join(embed_lines) + "\n", encoding="utf-8")
    truth = {
        "params": asdict(params),
        "doc_clusters": {_doc_id(i, width): int(doc_cluster[i]) for i in range(n)},
        "journal_clusters": {journals[k]: entity_cluster[k] for k in range(params.n_entities)},
        "topic_clusters": {topics[k]: entity_cluster[k] for k in range(params.n_entities)},
    }
    truth_path.write_text(json.dumps(truth, ensure_ascii=True, indent=1) + "\n", encoding="utf-8")
    return {
        "corpus": str(out_path),
        "embeddings": str(embeddings_path) if params.with_embeddings else None,
        "truth": str(truth_path),
        "n_docs": n,
        "years": [lo, hi],
        "citation_edges": int(citations.sum()),
    }
