"""Timing harness: indicator wall-clock across synthetic corpus sizes.

Each (size, indicator) row is timed after one discarded warm-up run; peak
memory is a tracemalloc estimate of Python allocations during the timed run.
"""

from __future__ import annotations

import csv
import time
import tracemalloc
from pathlib import Path

from ._util import params_fingerprint
from .cooc_novelty import foster_bridging, lee_commonness, uzzi_scores, wang_novelty
from .corpus import load_corpus
from .disruption import disruption_run
from .errors import InvalidParams
from .manifest import build_manifest, write_manifest
from .semantic import load_embeddings, semantic_scores
from .synth import SynthParams, synth_corpus

BENCH_YEARS = (2000, 2006)


def _runners(store, embeddings, year):
    return {
        "lee": lambda: lee_commonness(store, "journals", year, keep_distribution=False)[1],
        "uzzi": lambda: uzzi_scores(store, "journals", year, samples=20, seed=0, keep_distribution=False)[1],
        "foster": lambda: foster_bridging(store, "journals", year, keep_distribution=False)[1],
        "wang": lambda: wang_novelty(store, "journals", year, keep_distribution=False),
        "shibayama": lambda: semantic_scores(store, embeddings, field="title", year=year, keep_distribution=False)[0],
        "disruption": lambda: disruption_run(store, year=None),
    }


def run_bench(sizes: list[int], indicators: list[str], seed: int = 0, out_dir: Path = Path("bench_out")):
    if sizes != sorted(sizes):
        raise InvalidParams("sizes must be ascending")
    if any(s < 1 for s in sizes):
        raise InvalidParams("sizes must be positive")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows: list[dict] = []
    mid_year = (BENCH_YEARS[0] + BENCH_YEARS[1]) // 2
    for size in sizes:
        corpus_path = out_dir / f"bench_{size}.jsonl"
        params = SynthParams(n_docs=size, years=BENCH_YEARS, seed=seed)
        t0 = time.monotonic()
        summary = synth_corpus(params, corpus_path)
        build_s = time.monotonic() - t0
        store = load_corpus(corpus_path)
        embeddings = load_embeddings(summary["embeddings"])
        runners = _runners(store, embeddings, mid_year)
        for name in indicators:
            if name not in runners:
                raise InvalidParams(f"unknown bench indicator: {name}")
            fn = runners[name]
            fn()  # warm-up discarded: first runs pay cache effects
            tracemalloc.start()
            t0 = time.monotonic()
            records = fn()
            wall = time.monotonic() - t0
            _, peak = tracemalloc.get_traced_memory()
            tracemalloc.stop()
            rows.append(
                {
                    "indicator": name,
                    "size": size,
                    "fingerprint": params_fingerprint(
                        {"indicator": name, "size": size, "seed": seed, "years": list(BENCH_YEARS)}
                    ),
                    "corpus_build_s": round(build_s, 6),
                    "wall_clock_s": round(wall, 6),
                    "peak_mem_mb": round(peak / 1e6, 3),
                    "records": len(records),
                }
            )
    csv_path = out_dir / "bench.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=["indicator", "size", "fingerprint", "corpus_build_s", "wall_clock_s", "peak_mem_mb", "records"],
        )
        writer.writeheader()
        writer.writerows(rows)
    manifest = build_manifest(
        "bench",
        {"sizes": list(sizes), "indicators": list(indicators), "seed": seed},
        {f"bench_{size}": out_dir / f"bench_{size}.jsonl" for size in sizes},
        [csv_path],
        seed,
        {},
    )
    write_manifest(manifest, csv_path)
    return rows, csv_path
