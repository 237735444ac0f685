from collections import Counter

import pytest

from bibnov.corpus import docs_in_year, parse_document
from bibnov.errors import InvalidParams, NoDocuments
from bibnov.graphs import build_cooc_graph
from bibnov.oracle import oracle_exact_edge_stats
from bibnov.resampling import build_plan, draw_sample, resample_stats

from conftest import raw_doc, store_from_raw


def fig_docs():
    """P cites (A,1985),(D,1985),(B,1987); P' cites (B,1985),(C,1986),(E,1987)."""
    return [
        parse_document(
            raw_doc("P", 1990, refs=[
                {"source": "A", "year": 1985},
                {"source": "D", "year": 1985},
                {"source": "B", "year": 1987},
            ])
        ),
        parse_document(
            raw_doc("Q", 1990, refs=[
                {"source": "B", "year": 1985},
                {"source": "C", "year": 1986},
                {"source": "E", "year": 1987},
            ])
        ),
    ]


class TestBuildPlan:
    def test_strata_layout(self):
        plan = build_plan(fig_docs(), "journals", 10, 0)
        by_year = {s.year: s for s in plan.strata}
        assert sorted(by_year) == [1985, 1986, 1987]
        assert Counter(by_year[1985].labels) == Counter(["a", "d", "b"])
        assert list(by_year[1985].slots) == [0, 0, 1]
        assert by_year[1986].labels == ("c",)
        assert Counter(by_year[1987].labels) == Counter(["b", "e"])

    def test_all_undated_single_stratum(self):
        docs = [parse_document(raw_doc("P", 2000, sources=["A", "B"]))]
        plan = build_plan(docs, "journals", 2, 0)
        assert len(plan.strata) == 1
        assert plan.strata[0].year is None

    def test_keywords_use_missing_year_stratum(self):
        docs = [parse_document(raw_doc("P", 2000, keywords=["a", "b"]))]
        plan = build_plan(docs, "keywords", 2, 0)
        assert [s.year for s in plan.strata] == [None]

    def test_single_document_permutations_trivial(self):
        docs = [parse_document(raw_doc("P", 2000, refs=[{"source": "A", "year": 1999}, {"source": "B", "year": 1999}]))]
        plan = build_plan(docs, "journals", 4, 0)
        for k in range(4):
            world = draw_sample(plan, k)
            assert Counter(world[0]) == Counter(["a", "b"])

    def test_errors(self):
        with pytest.raises(NoDocuments):
            build_plan([], "journals", 1, 0)
        with pytest.raises(InvalidParams):
            build_plan(fig_docs(), "journals", 0, 0)


class TestDrawSample:
    def test_determinism(self):
        plan = build_plan(fig_docs(), "journals", 8, 123)
        assert draw_sample(plan, 3) == draw_sample(plan, 3)

    def test_distinct_samples_differ_somewhere(self):
        plan = build_plan(fig_docs(), "journals", 64, 5)
        worlds = {tuple(tuple(sorted(doc)) for doc in draw_sample(plan, k)) for k in range(64)}
        assert len(worlds) > 1

    def test_conservation_every_sample(self):
        plan = build_plan(fig_docs(), "journals", 50, 99)
        # Per-document labels come out ordered by stratum, so each document's
        # list splits into per-stratum segments of known lengths.
        seg_len = [
            [int((s.slots == d).sum()) for s in plan.strata] for d in range(plan.n_docs)
        ]
        for k in range(50):
            world = draw_sample(plan, k)
            for si, stratum in enumerate(plan.strata):
                got = Counter()
                for d, labels in enumerate(world):
                    start = sum(seg_len[d][:si])
                    segment = labels[start:start + seg_len[d][si]]
                    got.update(segment)
                    assert len(segment) == seg_len[d][si]  # per-doc per-stratum count
                assert got == Counter(stratum.labels)      # per-stratum multiset

    def test_sample_index_bounds(self):
        plan = build_plan(fig_docs(), "journals", 2, 0)
        with pytest.raises(InvalidParams):
            draw_sample(plan, 2)


class TestResampleStats:
    def test_single_sample_zero_std(self):
        docs = fig_docs()
        plan = build_plan(docs, "journals", 1, 7)
        graph = build_cooc_graph(docs, "journals")
        stats = resample_stats(plan, graph)
        assert all(v == 0.0 for v in stats.std.values())

    def test_identical_documents_invariant(self):
        docs = [
            parse_document(raw_doc(f"p{i}", 2000, refs=[
                {"source": "A", "year": 1999}, {"source": "B", "year": 1998}
            ]))
            for i in range(4)
        ]
        plan = build_plan(docs, "journals", 25, 3)
        graph = build_cooc_graph(docs, "journals")
        stats = resample_stats(plan, graph)
        pair = (graph.node_ids["a"], graph.node_ids["b"])
        assert stats.mean[pair] == graph.weight("a", "b") == 4
        assert stats.std[pair] == 0.0

    def test_mean_matches_enumeration_oracle(self):
        # 2 docs, 2 strata of 2: four equally likely worlds, every edge mean 0.5.
        raws = [
            raw_doc("P", 2000, refs=[{"source": "A", "year": 1998}, {"source": "B", "year": 1999}]),
            raw_doc("Q", 2000, refs=[{"source": "C", "year": 1998}, {"source": "D", "year": 1999}]),
        ]
        store = store_from_raw(raws)
        docs = docs_in_year(store, 2000)
        exact = oracle_exact_edge_stats(store, "journals", 2000)
        plan = build_plan(docs, "journals", 1000, 42, focal_year=2000)
        graph = build_cooc_graph(docs, "journals")
        stats = resample_stats(plan, graph)
        # One slot per stratum per doc: only cross-stratum pairings are reachable.
        assert exact is not None and len(exact) == 4
        for (a, b), (exact_mean, exact_std, _m4) in exact.items():
            pair = graph.pair_index(a, b)
            assert stats.mean[pair] == pytest.approx(exact_mean, abs=0.05)
            assert stats.std[pair] == pytest.approx(exact_std, abs=0.05)

    def test_thread_independence(self):
        docs = fig_docs()
        plan = build_plan(docs, "journals", 30, 11)
        graph = build_cooc_graph(docs, "journals")
        serial = resample_stats(plan, graph, threads=1)
        threaded = resample_stats(plan, graph, threads=8)
        assert serial.mean == threaded.mean
        assert serial.std == threaded.std

    def test_aggregate_conservation(self):
        docs = fig_docs()
        plan = build_plan(docs, "journals", 20, 2)
        budget = sum(
            len({r.source for r in d.references}) * (len({r.source for r in d.references}) - 1) // 2
            for d in docs
        )
        for k in range(20):
            world = draw_sample(plan, k)
            total_pairs = sum(len(set(doc)) * (len(set(doc)) - 1) // 2 for doc in world)
            assert total_pairs <= budget
