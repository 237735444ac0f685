import pytest

from bibnov.corpus import load_corpus
from bibnov.cooc_novelty import lee_commonness
from bibnov.errors import InvalidParams
from bibnov.graphs import build_citation_graph
from bibnov.synth import SynthParams, synth_corpus


def test_determinism_byte_identical(tmp_path):
    params = SynthParams(n_docs=100, n_entities=12, years=(2000, 2004), seed=1)
    a = synth_corpus(params, tmp_path / "a.jsonl")
    b = synth_corpus(params, tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    assert (tmp_path / "a.embeddings.jsonl").read_bytes() == (tmp_path / "b.embeddings.jsonl").read_bytes()
    assert a["citation_edges"] == b["citation_edges"]


def test_seed_changes_output(tmp_path):
    synth_corpus(SynthParams(n_docs=50, seed=1), tmp_path / "a.jsonl")
    synth_corpus(SynthParams(n_docs=50, seed=2), tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() != (tmp_path / "b.jsonl").read_bytes()


def test_single_year_has_no_citations(tmp_path):
    summary = synth_corpus(SynthParams(n_docs=60, years=(2000, 2000), seed=3), tmp_path / "c.jsonl")
    store = load_corpus(summary["corpus"])
    graph = build_citation_graph(store)
    assert all(len(refs) == 0 for refs in graph.refs_of)
    assert summary["citation_edges"] == 0


def test_two_entities_force_unit_commonness(tmp_path):
    summary = synth_corpus(
        SynthParams(n_docs=80, n_entities=2, years=(2000, 2002), seed=4, keywords_range=(2, 2)),
        tmp_path / "c.jsonl",
    )
    store = load_corpus(summary["corpus"])
    table, records = lee_commonness(store, "keywords", 2001)
    assert list(table.values.values()) == [1.0]
    assert all(r.scores["commonness"] == 0.0 for r in records)


def test_embeddings_cover_all_documents(tmp_path):
    summary = synth_corpus(SynthParams(n_docs=30, seed=5, embed_dim=4), tmp_path / "c.jsonl")
    store = load_corpus(summary["corpus"])
    ids = set()
    import json

    with open(summary["embeddings"], encoding="utf-8") as fh:
        for line in fh:
            ids.add(json.loads(line)["id"])
    for doc in store.documents.values():
        assert doc.title_vector_id in ids
        assert doc.abstract_vector_id in ids


def test_corpus_structure_invariant_to_embeddings(tmp_path):
    with_emb = SynthParams(n_docs=40, seed=6)
    without = SynthParams(n_docs=40, seed=6, with_embeddings=False)
    synth_corpus(with_emb, tmp_path / "a.jsonl")
    synth_corpus(without, tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    assert not (tmp_path / "b.embeddings.jsonl").exists()


def test_reference_years_strictly_past_for_in_corpus(tmp_path):
    summary = synth_corpus(SynthParams(n_docs=120, seed=7, p_in_corpus=1.0), tmp_path / "c.jsonl")
    store = load_corpus(summary["corpus"])
    for doc in store.documents.values():
        for ref in doc.references:
            if ref.ref_id is not None:
                assert store.documents[ref.ref_id].year < doc.year


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_docs": 0},
        {"n_docs": 5, "years": (2005, 2000)},
        {"n_docs": 5, "n_entities": 0},
        {"n_docs": 5, "p_in_cluster": 1.5},
        {"n_docs": 5, "refs_range": (4, 2)},
        {"n_docs": 5, "ref_age_p": 0.0},
    ],
)
def test_invalid_params(tmp_path, kwargs):
    with pytest.raises(InvalidParams):
        synth_corpus(SynthParams(**kwargs), tmp_path / "c.jsonl")
