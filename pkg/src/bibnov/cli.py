"""Command-line front end.

Exit codes: 0 success, 2 partial success (some documents skipped or ingest
warnings), 1 failure. Every score output gets a ``.manifest.json`` sidecar;
identical manifests (minus wall-clock) imply byte-identical score payloads.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from ._util import resolve_threads
from .cooc_novelty import foster_bridging, lee_commonness, uzzi_scores, wang_novelty
from .corpus import ParseConfig, load_corpus
from .disruption import ALL_MEASURES, disruption_run
from .errors import BibnovError, InvalidParams
from .graphs import cumulative_graph, save_graph, year_graph
from .manifest import PhaseTimer, build_manifest, write_manifest
from .records import score_file_name, write_score_file
from .reports import (
    correlation_table,
    doc_distributions,
    load_records,
    trends_table,
    write_correlation,
    write_doc_report,
    write_trends,
)
from .semantic import load_embeddings, semantic_scores
from .synth import SynthParams, synth_corpus

EXIT_PARTIAL = 2


def _parse_years(_ctx, _param, value):
    if value is None:
        return None
    try:
        lo, hi = value.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise click.BadParameter("expected lo:hi, e.g. 2000:2010")


def _load(corpus_path, years, use_cache):
    return load_corpus(corpus_path, year_range=years, config=ParseConfig(), use_cache=use_cache)


def _emit(records, out_dir, indicator, entity, year, command, params, inputs, seed, timer):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / score_file_name(indicator, entity, year if year is not None else "all")
    write_score_file(records, path)
    manifest = build_manifest(command, params, inputs, [path], seed, timer.phases)
    write_manifest(manifest, path)
    click.echo(f"wrote {path} ({len(records)} records)")
    return path


def _finish(store, skipped: int = 0):
    if store is not None and store.warnings:
        click.echo(f"ingest warnings: {dict(store.warnings)}", err=True)
        sys.exit(EXIT_PARTIAL)
    if skipped:
        click.echo(f"skipped {skipped} document(s)", err=True)
        sys.exit(EXIT_PARTIAL)


def corpus_options(fn):
    fn = click.option("--corpus", "corpus_path", required=True,
                      type=click.Path(exists=True, dir_okay=False), help="Line-delimited corpus file.")(fn)
    fn = click.option("--years", callback=_parse_years, default=None,
                      help="Restrict ingest to lo:hi publication years.")(fn)
    fn = click.option("--out-dir", default=".", type=click.Path(file_okay=False), show_default=True)(fn)
    fn = click.option("--cache/--no-cache", "use_cache", default=True,
                      help="Use the columnar cache beside the corpus file.")(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="bibnov")
def main():
    """Novelty and disruption indicators over bibliographic corpora."""


@main.command()
@corpus_options
@click.option("--table-out", type=click.Path(dir_okay=False), default=None,
              help="Also write a per-document summary table (jsonl).")
def ingest(corpus_path, years, out_dir, use_cache, table_out):
    """Parse and validate a corpus, building the columnar cache."""
    timer = PhaseTimer()
    with timer.phase("load"):
        store = _load(corpus_path, years, use_cache)
    lo, hi = store.year_span
    click.echo(f"{len(store)} documents, years {lo}..{hi}")
    if table_out:
        rows = []
        for doc_id in sorted(store.documents):
            doc = store.documents[doc_id]
            rows.append(
                {
                    "id": doc.id,
                    "year": doc.year,
                    "n_references": len(doc.references),
                    "n_keywords": len(doc.keywords),
                }
            )
        path = Path(table_out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=True, separators=(",", ":")) + "\n")
        manifest = build_manifest(
            "ingest", {"years": list(years) if years else None},
            {"corpus": corpus_path}, [path], None, timer.phases,
        )
        write_manifest(manifest, path)
        click.echo(f"wrote {path}")
    _finish(store)


@main.group()
def cooc():
    """Co-occurrence graph utilities."""


@cooc.command("build")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Line-delimited corpus file.")
@click.option("--on", "entity_kind", type=click.Choice(["journals", "keywords"]), required=True)
@click.option("--years", callback=_parse_years, required=True,
              help="Build one graph cache per year in lo:hi.")
@click.option("--out-dir", default=".", type=click.Path(file_okay=False), show_default=True)
@click.option("--cache/--no-cache", "use_cache", default=True)
@click.option("--cumulative", is_flag=True, help="Also write the cumulative graph up to hi.")
def cooc_build(corpus_path, entity_kind, years, out_dir, use_cache, cumulative):
    """Build per-year (and optionally cumulative) graph cache files.

    The corpus is ingested unrestricted so the cumulative graph sees all
    history before the requested span.
    """
    timer = PhaseTimer()
    with timer.phase("load"):
        store = _load(corpus_path, None, use_cache)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lo, hi = years
    written = []
    with timer.phase("build"):
        for t in range(lo, hi + 1):
            graph = year_graph(store, entity_kind, t)
            path = out / f"cooc_{entity_kind}_{t}.npz"
            save_graph(graph, path)
            written.append(path)
            click.echo(f"wrote {path} (v={graph.n_nodes}, N={graph.total_weight})")
        if cumulative:
            graph = cumulative_graph(store, entity_kind, hi, inclusive=True)
            path = out / f"cooc_{entity_kind}_cumulative_{hi}.npz"
            save_graph(graph, path)
            written.append(path)
            click.echo(f"wrote {path} (v={graph.n_nodes}, N={graph.total_weight})")
    manifest = build_manifest(
        "cooc build", {"on": entity_kind, "years": [lo, hi], "cumulative": cumulative},
        {"corpus": corpus_path}, written, None, timer.phases,
    )
    write_manifest(manifest, written[-1])
    _finish(store)


@main.group()
def novelty():
    """Novelty indicators."""


@novelty.command()
@corpus_options
@click.option("--on", "entity_kind", type=click.Choice(["journals", "keywords"]), default="journals", show_default=True)
@click.option("--year", type=int, required=True)
@click.option("--samples", type=int, default=20, show_default=True, help="Resampled networks per year.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True, help="0 = auto.")
@click.option("--distributions/--no-distributions", default=True, show_default=True)
def uzzi(corpus_path, years, out_dir, use_cache, entity_kind, year, samples, seed, threads, distributions):
    """Atypicality: z-scores against year-stratified shuffled networks."""
    timer = PhaseTimer()
    with timer.phase("load"):
        store = _load(corpus_path, years, use_cache)
    with timer.phase("score"):
        _, records = uzzi_scores(
            store, entity_kind, year, samples=samples, seed=seed,
            threads=resolve_threads(threads), keep_distribution=distributions,
        )
    _emit(records, out_dir, "uzzi", entity_kind, year, "novelty uzzi",
          {"on": entity_kind, "year": year, "samples": samples, "seed": seed},
          {"corpus": corpus_path}, seed, timer)
    _finish(store)


@novelty.command()
@corpus_options
@click.option("--on", "entity_kind", type=click.Choice(["journals", "keywords"]), default="journals", show_default=True)
@click.option("--year", type=int, required=True)
@click.option("--distributions/--no-distributions", default=True, show_default=True)
def lee(corpus_path, years, out_dir, use_cache, entity_kind, year, distributions):
    """Commonness: -log P10 of degree-normalized pair frequencies."""
    timer = PhaseTimer()
    with timer.phase("load"):
        store = _load(corpus_path, years, use_cache)
    with timer.phase("score"):
        _, records = lee_commonness(store, entity_kind, year, keep_distribution=distributions)
    _emit(records, out_dir, "lee", entity_kind, year, "novelty lee",
          {"on": entity_kind, "year": year}, {"corpus": corpus_path}, None, timer)
    _finish(store)


@novelty.command()
@corpus_options
@click.option("--on", "entity_kind", type=click.Choice(["journals", "keywords"]), default="journals", show_default=True)
@click.option("--year", type=int, required=True)
@click.option("--resolution", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--distributions/--no-distributions", default=True, show_default=True)
def foster(corpus_path, years, out_dir, use_cache, entity_kind, year, resolution, seed, distributions):
    """Bridging: share of pairs spanning different communities."""
    timer = PhaseTimer()
    with timer.phase("load"):
        store = _load(corpus_path, years, use_cache)
    with timer.phase("score"):
        _, records = foster_bridging(
            store, entity_kind, year, resolution=resolution, seed=seed,
            keep_distribution=distributions,
        )
    _emit(records, out_dir, "foster", entity_kind, year, "novelty foster",
          {"on": entity_kind, "year": year, "resolution": resolution, "seed": seed},
          {"corpus": corpus_path}, seed, timer)
    _finish(store)


@novelty.command()
@corpus_options
@click.option("--on", "entity_kind", type=click.Choice(["journals", "keywords"]), default="journals", show_default=True)
@click.option("--year", type=int, required=True)
@click.option("--b", "backward", type=int, default=3, show_default=True, help="Backward window for profiles.")
@click.option("--f", "forward", type=int, default=3, show_default=True, help="Forward reuse window.")
@click.option("--reuse", type=int, default=1, show_default=True, help="Future reuse threshold.")
@click.option("--distributions/--no-distributions", default=True, show_default=True)
def wang(corpus_path, years, out_dir, use_cache, entity_kind, year, backward, forward, reuse, distributions):
    """Reuse novelty: cosine difficulty of pairs new at t and reused after."""
    timer = PhaseTimer()
    with timer.phase("load"):
        store = _load(corpus_path, years, use_cache)
    with timer.phase("score"):
        records = wang_novelty(
            store, entity_kind, year, backward=backward, forward=forward, reuse=reuse,
            keep_distribution=distributions,
        )
    _emit(records, out_dir, "wang", entity_kind, year, "novelty wang",
          {"on": entity_kind, "year": year, "b": backward, "f": forward, "reuse": reuse},
          {"corpus": corpus_path}, None, timer)
    _finish(store)


@novelty.command()
@corpus_options
@click.option("--embeddings", "embeddings_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--field", type=click.Choice(["title", "abstract"]), default="title", show_default=True)
@click.option("--q", type=float, default=10, show_default=True, help="Score percentile.")
@click.option("--year", type=int, default=None, help="Restrict scoring to one year.")
@click.option("--distributions/--no-distributions", default=True, show_default=True)
def shibayama(corpus_path, years, out_dir, use_cache, embeddings_path, field, q, year, distributions):
    """Semantic novelty: percentile of pairwise reference embedding distances."""
    timer = PhaseTimer()
    with timer.phase("load"):
        store = _load(corpus_path, years, use_cache)
        embeddings = load_embeddings(embeddings_path)
    with timer.phase("score"):
        records, skipped = semantic_scores(
            store, embeddings, field=field, q=q, year=year, keep_distribution=distributions,
        )
    _emit(records, out_dir, "shibayama", field, year, "novelty shibayama",
          {"field": field, "q": q, "year": year},
          {"corpus": corpus_path, "embeddings": embeddings_path}, None, timer)
    _finish(store, skipped)


@main.command()
@corpus_options
@click.option("--year", type=int, default=None, help="Score only focal papers of this year.")
@click.option("--measures", default=",".join(ALL_MEASURES), show_default=True)
@click.option("--threads", type=int, default=1, show_default=True, help="0 = auto.")
def disruption(corpus_path, years, out_dir, use_cache, year, measures, threads):
    """Disruption measures over the citation graph."""
    timer = PhaseTimer()
    with timer.phase("load"):
        store = _load(corpus_path, years, use_cache)
    measure_list = tuple(m.strip() for m in measures.split(",") if m.strip())
    with timer.phase("score"):
        records = disruption_run(
            store, year=year, measures=measure_list, threads=resolve_threads(threads)
        )
    _emit(records, out_dir, "disruption", "citations", year, "disruption",
          {"year": year, "measures": list(measure_list)}, {"corpus": corpus_path}, None, timer)
    _finish(store)


@main.command()
@click.option("--n-docs", type=int, required=True)
@click.option("--n-entities", type=int, default=40, show_default=True)
@click.option("--years", callback=_parse_years, default="2000:2009", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--clusters", type=int, default=4, show_default=True)
@click.option("--refs", callback=_parse_years, default="3:10", show_default=True, help="References per document (lo:hi).")
@click.option("--keywords", callback=_parse_years, default="2:6", show_default=True, help="Keywords per document (lo:hi).")
@click.option("--p-in-cluster", type=float, default=0.8, show_default=True)
@click.option("--p-in-corpus", type=float, default=0.6, show_default=True)
@click.option("--embed-dim", type=int, default=16, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def synth(n_docs, n_entities, years, seed, clusters, refs, keywords, p_in_cluster, p_in_corpus, embed_dim, out_path):
    """Generate a deterministic synthetic corpus with planted structure."""
    params = SynthParams(
        n_docs=n_docs,
        n_entities=n_entities,
        years=years,
        seed=seed,
        n_clusters=clusters,
        refs_range=refs,
        keywords_range=keywords,
        p_in_cluster=p_in_cluster,
        p_in_corpus=p_in_corpus,
        embed_dim=embed_dim,
    )
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    summary = synth_corpus(params, out_path)
    click.echo(json.dumps(summary, ensure_ascii=True))


@main.group()
def report():
    """Reports over score files."""


@report.command()
@click.argument("scores", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out-base", default="trends", show_default=True,
              help="Output base path; writes <base>.csv and <base>.json.")
def trends(scores, out_base):
    """Yearly mean/std/percentiles per indicator and score."""
    rows = trends_table(load_records(scores))
    csv_path, json_path = write_trends(rows, out_base)
    click.echo(f"wrote {csv_path} and {json_path} ({len(rows)} rows)")


@report.command()
@click.argument("scores", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out-base", default="correlation", show_default=True)
def correlate(scores, out_base):
    """Pairwise Pearson and Spearman correlations between score series."""
    labels, pearson, spearman, counts = correlation_table(load_records(scores))
    paths = write_correlation(labels, pearson, spearman, counts, out_base)
    click.echo(f"wrote {', '.join(str(p) for p in paths)} ({len(labels)} series)")


@report.command()
@click.argument("scores", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--doc-id", required=True)
@click.option("--out", "out_path", default=None, help="Output CSV (default <doc-id>.csv).")
def doc(scores, doc_id, out_path):
    """Raw per-pair distributions and summary scores for one document."""
    rows = doc_distributions(doc_id, load_records(scores))
    path = write_doc_report(rows, out_path or f"{doc_id}.csv")
    click.echo(f"wrote {path} ({len(rows)} rows)")


@main.command()
@corpus_options
@click.option("--year", type=int, required=True)
@click.option("--on", "entity_kind", type=click.Choice(["journals", "keywords"]), default="journals", show_default=True)
@click.option("--embeddings", "embeddings_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--samples", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def verify(corpus_path, years, out_dir, use_cache, year, entity_kind, embeddings_path, samples, seed):
    """Diff every indicator against the naive oracle on a small corpus."""
    from .verify import run_verification

    store = _load(corpus_path, years, use_cache)
    embeddings = load_embeddings(embeddings_path) if embeddings_path else None
    results = run_verification(store, entity_kind, year, samples=samples, seed=seed, embeddings=embeddings)
    failed = False
    for name, n_docs, max_diff, ok in results:
        status = "PASS" if ok else "FAIL"
        click.echo(f"{status} {name:<12} docs={n_docs:<5} max_rel_diff={max_diff:.3e}")
        failed = failed or not ok
    if failed:
        sys.exit(1)


@main.command()
@click.option("--sizes", required=True, help="Comma-separated corpus sizes, ascending.")
@click.option("--indicators", default="lee,uzzi,foster,wang,shibayama,disruption", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", default="bench_out", show_default=True, type=click.Path(file_okay=False))
def bench(sizes, indicators, seed, out_dir):
    """Time indicator runs across synthetic corpus sizes."""
    from .bench import run_bench

    try:
        size_list = [int(float(s)) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise InvalidParams(f"bad sizes: {sizes}")
    indicator_list = [s.strip() for s in indicators.split(",") if s.strip()]
    rows, csv_path = run_bench(size_list, indicator_list, seed=seed, out_dir=Path(out_dir))
    for row in rows:
        click.echo(
            f"{row['indicator']:<12} n={row['size']:<8} wall={row['wall_clock_s']:.3f}s "
            f"peak_mem={row['peak_mem_mb']:.1f}MB"
        )
    click.echo(f"wrote {csv_path}")


def run():
    try:
        main(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except BibnovError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    run()
