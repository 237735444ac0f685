import pytest
from sklearn.base import clone

from bibnov.cooc_novelty import lee_commonness
from bibnov.errors import InvalidParams
from bibnov.estimators import (
    Atypicality,
    Bridging,
    Commonness,
    DisruptionScores,
    ReuseNovelty,
    SemanticNovelty,
    records_frame,
)
from bibnov.synth import SynthParams, synth_corpus


@pytest.fixture(scope="module")
def corpus_path(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("est")
    summary = synth_corpus(
        SynthParams(n_docs=90, n_entities=14, years=(2000, 2004), seed=9, embed_dim=6),
        tmp / "c.jsonl",
    )
    return summary


class TestSklearnProtocol:
    def test_get_params_round_trip(self):
        est = Atypicality(entity_kind="keywords", year=2002, samples=7, seed=3)
        params = est.get_params()
        assert params["samples"] == 7
        rebuilt = Atypicality(**params)
        assert rebuilt.get_params() == params

    def test_clone(self):
        est = Commonness(entity_kind="journals", year=2002)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_set_params(self):
        est = Bridging()
        est.set_params(year=2001, resolution=0.5)
        assert est.year == 2001
        assert est.resolution == 0.5

    def test_not_fitted_error(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            Commonness(year=2000).transform(None)


class TestEstimatorResults:
    def test_commonness_matches_functional_path(self, corpus_path):
        df = Commonness(entity_kind="journals", year=2002).fit_transform(corpus_path["corpus"])
        from bibnov.corpus import load_corpus

        store = load_corpus(corpus_path["corpus"])
        _, records = lee_commonness(store, "journals", 2002)
        expected = records_frame(records)
        assert df.equals(expected)

    def test_atypicality_columns(self, corpus_path):
        df = Atypicality(entity_kind="journals", year=2002, samples=5, seed=0).fit_transform(
            corpus_path["corpus"]
        )
        assert {"doc_id", "novelty", "conventionality", "n_pairs", "degenerate_pairs"} <= set(df.columns)

    def test_semantic_requires_embeddings(self, corpus_path):
        with pytest.raises(InvalidParams):
            SemanticNovelty().fit(corpus_path["corpus"])

    def test_semantic_accepts_path(self, corpus_path):
        est = SemanticNovelty(embeddings=corpus_path["embeddings"], year=2002)
        df = est.fit_transform(corpus_path["corpus"])
        assert "novelty" in df.columns
        assert est.skipped_ >= 0

    def test_disruption_frame(self, corpus_path):
        df = DisruptionScores(year=2002).fit_transform(corpus_path["corpus"])
        assert {"di1", "dinok1", "depth", "breadth", "dependence", "independence"} <= set(df.columns)

    def test_reuse_novelty(self, corpus_path):
        df = ReuseNovelty(entity_kind="journals", year=2002, backward=2, forward=2).fit_transform(
            corpus_path["corpus"]
        )
        assert (df["novelty"] >= 0).all()

    def test_missing_year_validation(self, corpus_path):
        with pytest.raises(InvalidParams, match="year"):
            Commonness(entity_kind="journals").fit(corpus_path["corpus"])

    def test_bad_entity_kind(self, corpus_path):
        with pytest.raises(InvalidParams):
            Commonness(entity_kind="venues", year=2002).fit(corpus_path["corpus"])

    def test_transform_other_corpus_rejected(self, corpus_path):
        est = Commonness(entity_kind="journals", year=2002).fit(corpus_path["corpus"])
        from bibnov.corpus import load_corpus

        other = load_corpus(corpus_path["corpus"])
        with pytest.raises(InvalidParams):
            est.transform(other)

    def test_transform_fitted_corpus_object_ok(self, corpus_path):
        from bibnov.corpus import load_corpus

        store = load_corpus(corpus_path["corpus"])
        est = Commonness(entity_kind="journals", year=2002).fit(store)
        df = est.transform(store)
        assert len(df) > 0
