import json

import pytest

from bibnov.corpus import (
    CACHE_SUFFIX,
    ParseConfig,
    docs_in_year,
    load_corpus,
    parse_document,
)
from bibnov.errors import (
    EmptyRecord,
    IoFailure,
    MalformedYear,
    MissingField,
    NoValidRecords,
)

from conftest import raw_doc, write_corpus


class TestParseDocument:
    def test_schema_identity(self):
        doc = parse_document(
            {"id": "p1", "year": 2004, "references": [{"source": "J-A", "year": 2001}], "keywords": ["k1"]}
        )
        assert doc.id == "p1"
        assert doc.year == 2004
        assert len(doc.references) == 1
        assert doc.references[0].source == "j-a"
        assert doc.references[0].year == 2001
        assert doc.keywords == ("k1",)

    def test_missing_year(self):
        with pytest.raises(MissingField) as err:
            parse_document({"id": "p2", "references": [{"source": "x"}]})
        assert err.value.field == "year"

    def test_missing_id(self):
        with pytest.raises(MissingField):
            parse_document({"year": 2000, "keywords": ["a"]})

    def test_empty_record(self):
        with pytest.raises(EmptyRecord):
            parse_document({"id": "p3", "year": 2004, "references": [], "keywords": []})

    def test_malformed_year(self):
        with pytest.raises(MalformedYear):
            parse_document({"id": "p", "year": "2004", "keywords": ["a"]})
        with pytest.raises(MalformedYear):
            parse_document({"id": "p", "year": 2004.5, "keywords": ["a"]})

    def test_keyword_normalization_dedup(self):
        doc = parse_document({"id": "p", "year": 2000, "keywords": ["  Gene   Therapy ", "gene therapy", "other"]})
        assert doc.keywords == ("gene therapy", "other")

    def test_source_normalization(self):
        doc = parse_document({"id": "p", "year": 2000, "references": [{"source": " The  Journal "}]})
        assert doc.references[0].source == "the journal"

    def test_casefold_off(self):
        doc = parse_document(
            {"id": "p", "year": 2000, "keywords": ["Gene Therapy"]},
            config=ParseConfig(casefold=False),
        )
        assert doc.keywords == ("Gene Therapy",)

    def test_reference_year_clamped(self):
        warned = []
        doc = parse_document(
            {"id": "p", "year": 2000, "references": [{"source": "a", "year": 2005}, {"source": "b", "year": 2001}]},
            on_warning=warned.append,
        )
        # One-year lead is tolerated (in-press); beyond that clamps to the citing year.
        assert doc.references[0].year == 2000
        assert doc.references[1].year == 2001
        assert warned == ["reference_year_clamped"]

    def test_reference_without_id_or_source_dropped(self):
        warned = []
        doc = parse_document(
            {"id": "p", "year": 2000, "references": [{"year": 1999}, {"ref_id": "q"}]},
            on_warning=warned.append,
        )
        assert len(doc.references) == 1
        assert warned == ["reference_dropped"]


class TestLoadCorpus:
    def test_all_valid(self, tmp_path):
        path = write_corpus(
            tmp_path / "c.jsonl",
            [raw_doc("a", 2000, keywords=["x"]), raw_doc("b", 2001, keywords=["x"]), raw_doc("c", 2002, keywords=["x"])],
        )
        store = load_corpus(path)
        assert len(store) == 3

    def test_year_range_filter(self, tmp_path):
        path = write_corpus(
            tmp_path / "c.jsonl",
            [raw_doc("a", 1999, keywords=["x"]), raw_doc("b", 2000, keywords=["x"]), raw_doc("c", 2001, keywords=["x"])],
        )
        store = load_corpus(path, year_range=(2000, 2000))
        assert sorted(store.documents) == ["b"]

    def test_duplicate_id_last_wins(self, tmp_path):
        path = write_corpus(
            tmp_path / "c.jsonl",
            [raw_doc("a", 2000, keywords=["first"]), raw_doc("a", 2000, keywords=["second"])],
        )
        store = load_corpus(path)
        assert len(store) == 1
        assert store.documents["a"].keywords == ("second",)
        assert store.warnings["duplicate_id"] == 1

    def test_empty_record_warns_not_fatal(self, tmp_path):
        path = write_corpus(
            tmp_path / "c.jsonl",
            [raw_doc("a", 2000, keywords=["x"]), raw_doc("b", 2000)],
        )
        store = load_corpus(path)
        assert sorted(store.documents) == ["a"]
        assert store.warnings["empty_record"] == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            load_corpus(tmp_path / "nope.jsonl")

    def test_no_valid_records(self, tmp_path):
        path = (tmp_path / "c.jsonl")
        path.write_text("not json\n{\"id\": \"x\"}\n", encoding="utf-8")
        with pytest.raises(NoValidRecords):
            load_corpus(path)

    def test_determinism(self, tmp_path):
        raws = [raw_doc(f"d{i}", 2000 + i % 3, keywords=["k"]) for i in range(20)]
        path = write_corpus(tmp_path / "c.jsonl", raws)
        a = load_corpus(path)
        b = load_corpus(path)
        assert a.documents == b.documents
        assert a.year_index == b.year_index

    def test_partition_property(self, tmp_path):
        raws = [raw_doc(f"d{i}", 2000 + i % 4, keywords=["k"]) for i in range(17)]
        store = load_corpus(write_corpus(tmp_path / "c.jsonl", raws))
        assert sum(len(docs_in_year(store, t)) for t in store.years()) == len(store)


class TestDocsInYear:
    def test_basic_and_absent(self, tmp_path):
        store = load_corpus(
            write_corpus(tmp_path / "c.jsonl", [raw_doc("p1", 2004, keywords=["x"]), raw_doc("p2", 2005, keywords=["x"])])
        )
        assert [d.id for d in docs_in_year(store, 2004)] == ["p1"]
        assert docs_in_year(store, 1990) == []

    def test_ordering_contract(self, tmp_path):
        store = load_corpus(
            write_corpus(tmp_path / "c.jsonl", [raw_doc("pB", 2004, keywords=["x"]), raw_doc("pA", 2004, keywords=["x"])])
        )
        assert [d.id for d in docs_in_year(store, 2004)] == ["pA", "pB"]


class TestColumnarCache:
    def test_round_trip_identical(self, tmp_path):
        raws = [
            raw_doc("a", 2000, sources=["J One", "J Two"], keywords=["k1", "k2"],
                    refs=[{"ref_id": "b", "year": 1999}], title_vector_id="tv-a"),
            raw_doc("b", 1999, keywords=["k3"], abstract_vector_id="av-b"),
        ]
        path = write_corpus(tmp_path / "c.jsonl", raws)
        first = load_corpus(path, use_cache=True)
        assert (tmp_path / ("c.jsonl" + CACHE_SUFFIX)).is_file()
        second = load_corpus(path, use_cache=True)
        assert second.provenance["cache_used"]
        assert first.documents == second.documents
        assert first.year_index == second.year_index
        assert first.warnings == second.warnings

    def test_cache_invalidated_on_change(self, tmp_path):
        path = write_corpus(tmp_path / "c.jsonl", [raw_doc("a", 2000, keywords=["x"])])
        load_corpus(path, use_cache=True)
        write_corpus(path, [raw_doc("a", 2000, keywords=["x"]), raw_doc("b", 2001, keywords=["y"])])
        store = load_corpus(path, use_cache=True)
        assert not store.provenance["cache_used"]
        assert len(store) == 2

    def test_cache_ignores_other_config(self, tmp_path):
        path = write_corpus(tmp_path / "c.jsonl", [raw_doc("a", 2000, keywords=["Case Sensitive"])])
        load_corpus(path, use_cache=True)
        store = load_corpus(path, config=ParseConfig(casefold=False), use_cache=True)
        assert not store.provenance["cache_used"]
        assert store.documents["a"].keywords == ("Case Sensitive",)
