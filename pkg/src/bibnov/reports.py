"""Corpus-level reporting over score files: trends, correlations, one-document dumps.

Reports emit data (CSV/JSON), never rendered figures.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np
from scipy import stats as scipy_stats

from ._util import PERCENTILE_GRID, percentile_vector
from .errors import NoOverlap, NoScores, UnknownDocument
from .records import ScoreRecord, read_score_file


def load_records(paths) -> list[ScoreRecord]:
    records: list[ScoreRecord] = []
    for path in paths:
        records.extend(read_score_file(path))
    if not records:
        raise NoScores("no score records in the given files")
    return records


def trends_table(records: list[ScoreRecord]) -> list[dict]:
    """Per (indicator, entity, year, score name): count, mean, std, percentile vector."""
    if not records:
        raise NoScores("no score records")
    groups: dict[tuple, list[float]] = {}
    for rec in records:
        for name, value in rec.scores.items():
            if value is None:
                continue
            groups.setdefault((rec.indicator, rec.entity, rec.year, name), []).append(float(value))
    rows = []
    for key in sorted(groups):
        values = np.asarray(groups[key], dtype=np.float64)
        indicator, entity, year, name = key
        row = {
            "indicator": indicator,
            "entity": entity,
            "year": year,
            "score": name,
            "count": int(values.size),
            "mean": float(values.mean()),
            "std": float(values.std()),
        }
        row.update(percentile_vector(values))
        rows.append(row)
    if not rows:
        raise NoScores("all score values are undefined")
    return rows


def write_trends(rows: list[dict], out_base) -> tuple[Path, Path]:
    out_base = Path(out_base)
    csv_path = out_base.with_suffix(".csv")
    json_path = out_base.with_suffix(".json")
    fieldnames = ["indicator", "entity", "year", "score", "count", "mean", "std"] + [
        f"p{q}" for q in PERCENTILE_GRID
    ]
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    json_path.write_text(json.dumps(rows, ensure_ascii=True, indent=1) + "\n", encoding="utf-8")
    return csv_path, json_path


def _series(records: list[ScoreRecord]) -> dict[str, dict[str, float]]:
    """One series per (indicator, entity, score name), pooled across years."""
    series: dict[str, dict[str, float]] = {}
    for rec in records:
        for name, value in rec.scores.items():
            if value is None:
                continue
            series.setdefault(f"{rec.indicator}:{rec.entity}:{name}", {})[rec.doc_id] = float(value)
    return series


def correlation_table(records: list[ScoreRecord]):
    """Pairwise Pearson and Spearman over the documents shared by each series pair.

    Undefined scores are excluded pairwise; a pair with fewer than two shared
    documents raises NoOverlap.
    """
    series = _series(records)
    labels = sorted(series)
    if len(labels) < 2:
        raise NoScores("need at least two score series to correlate")
    k = len(labels)
    pearson = [[1.0] * k for _ in range(k)]
    spearman = [[1.0] * k for _ in range(k)]
    counts = [[0] * k for _ in range(k)]
    for i in range(k):
        counts[i][i] = len(series[labels[i]])
    for i in range(k):
        for j in range(i + 1, k):
            a, b = series[labels[i]], series[labels[j]]
            shared = sorted(a.keys() & b.keys())
            if len(shared) < 2:
                raise NoOverlap(f"{labels[i]} and {labels[j]} share {len(shared)} document(s)")
            x = np.array([a[d] for d in shared])
            y = np.array([b[d] for d in shared])
            if x.std() == 0.0 or y.std() == 0.0:
                p = s = math.nan
            else:
                p = float(np.corrcoef(x, y)[0, 1])
                s = float(scipy_stats.spearmanr(x, y).statistic)
            pearson[i][j] = pearson[j][i] = p
            spearman[i][j] = spearman[j][i] = s
            counts[i][j] = counts[j][i] = len(shared)
    return labels, pearson, spearman, counts


def write_correlation(labels, pearson, spearman, counts, out_base) -> tuple[Path, ...]:
    out_base = Path(out_base)
    json_path = out_base.with_suffix(".json")
    payload = {"labels": labels, "pearson": pearson, "spearman": spearman, "n": counts}
    json_path.write_text(
        json.dumps(payload, ensure_ascii=True, indent=1, allow_nan=True) + "\n", encoding="utf-8"
    )
    out_paths = [json_path]
    for kind, matrix in (("pearson", pearson), ("spearman", spearman)):
        path = out_base.parent / f"{out_base.stem}_{kind}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([""] + labels)
            for label, row in zip(labels, matrix):
                writer.writerow([label] + [f"{v:.6f}" if not math.isnan(v) else "" for v in row])
        out_paths.append(path)
    return tuple(out_paths)


def doc_distributions(doc_id: str, records: list[ScoreRecord]) -> list[dict]:
    """Plot-ready rows for one document: raw distributions plus summary scores."""
    rows = []
    for rec in sorted(records, key=lambda r: (r.indicator, r.entity, r.year)):
        if rec.doc_id != doc_id:
            continue
        for name in sorted(rec.scores):
            value = rec.scores[name]
            rows.append(
                {
                    "indicator": rec.indicator,
                    "entity": rec.entity,
                    "year": rec.year,
                    "kind": "score",
                    "name": name,
                    "value": value,
                }
            )
        for value in rec.distribution or []:
            rows.append(
                {
                    "indicator": rec.indicator,
                    "entity": rec.entity,
                    "year": rec.year,
                    "kind": "distribution",
                    "name": "value",
                    "value": value,
                }
            )
    if not rows:
        raise UnknownDocument(f"{doc_id} appears in no score file")
    return rows


def write_doc_report(rows: list[dict], out_path) -> Path:
    out_path = Path(out_path)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["indicator", "entity", "year", "kind", "name", "value"])
        writer.writeheader()
        writer.writerows(rows)
    return out_path
