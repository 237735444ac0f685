import time

import pytest

from bibnov.bench import run_bench
from bibnov.cooc_novelty import uzzi_scores
from bibnov.corpus import load_corpus
from bibnov.errors import InvalidParams
from bibnov.synth import SynthParams, synth_corpus


def test_report_shape_and_csv(tmp_path):
    rows, csv_path = run_bench([50, 100], ["lee"], seed=1, out_dir=tmp_path)
    assert [r["size"] for r in rows] == [50, 100]
    assert all(r["indicator"] == "lee" for r in rows)
    assert all(r["wall_clock_s"] >= 0 for r in rows)
    assert all(r["fingerprint"] for r in rows)
    assert csv_path.read_text().count("\n") == 3  # header + 2 rows


def test_empty_indicator_list(tmp_path):
    rows, csv_path = run_bench([50], [], seed=1, out_dir=tmp_path)
    assert rows == []
    assert csv_path.is_file()


def test_sizes_must_ascend(tmp_path):
    with pytest.raises(InvalidParams):
        run_bench([100, 50], ["lee"], out_dir=tmp_path)
    with pytest.raises(InvalidParams):
        run_bench([0], ["lee"], out_dir=tmp_path)


def test_unknown_indicator(tmp_path):
    with pytest.raises(InvalidParams):
        run_bench([50], ["sparkle"], out_dir=tmp_path)


def test_bench_scores_match_unbenched_run(tmp_path):
    rows, _ = run_bench([60], ["lee"], seed=2, out_dir=tmp_path)
    store = load_corpus(tmp_path / "bench_60.jsonl")
    from bibnov.cooc_novelty import lee_commonness

    _, records = lee_commonness(store, "journals", 2003, keep_distribution=False)
    assert rows[0]["records"] == len(records)


def test_sample_count_workload_monotone(tmp_path):
    # More resampled networks can only add work: s=50 wall-clock >= s=1.
    summary = synth_corpus(
        SynthParams(n_docs=2500, n_entities=60, years=(2000, 2002), seed=3, with_embeddings=False),
        tmp_path / "c.jsonl",
    )
    store = load_corpus(summary["corpus"])

    def timed(samples):
        t0 = time.monotonic()
        uzzi_scores(store, "journals", 2001, samples=samples, seed=0, keep_distribution=False)
        return time.monotonic() - t0

    timed(1)  # warm-up
    assert timed(50) >= timed(1)
