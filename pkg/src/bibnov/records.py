"""Score records and their line-delimited serialization.

One record holds one (document, indicator, parameter-set) result. The JSON
key order is fixed and floats round-trip through repr, so identical inputs
always serialize to identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from ._util import params_fingerprint
from .errors import IoFailure


@dataclass
class ScoreRecord:
    doc_id: str
    indicator: str
    entity: str
    year: int
    params: dict
    scores: dict[str, float | None]
    percentiles: dict[str, float] | None = None
    distribution: list[float] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def fingerprint(self) -> str:
        return params_fingerprint({"indicator": self.indicator, "entity": self.entity, "year": self.year, **self.params})

    def to_json(self) -> str:
        payload = {
            "doc_id": self.doc_id,
            "indicator": self.indicator,
            "entity": self.entity,
            "year": self.year,
            "fingerprint": self.fingerprint,
            "params": self.params,
            "scores": self.scores,
            "percentiles": self.percentiles,
            "distribution": self.distribution,
            "meta": self.meta,
        }
        return json.dumps(payload, ensure_ascii=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "ScoreRecord":
        raw = json.loads(line)
        return cls(
            doc_id=raw["doc_id"],
            indicator=raw["indicator"],
            entity=raw["entity"],
            year=raw["year"],
            params=raw.get("params", {}),
            scores=raw.get("scores", {}),
            percentiles=raw.get("percentiles"),
            distribution=raw.get("distribution"),
            meta=raw.get("meta", {}),
        )


def score_file_name(indicator: str, entity: str, year: int) -> str:
    return f"{indicator}_{entity}_{year}.jsonl"


def write_score_file(records: Iterable[ScoreRecord], path) -> Path:
    """Write records sorted by doc_id; output bytes are a pure function of the records."""
    path = Path(path)
    ordered = sorted(records, key=lambda r: r.doc_id)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in ordered:
            fh.write(rec.to_json())
            fh.write("\n")
    return path


def read_score_file(path) -> list[ScoreRecord]:
    path = Path(path)
    if not path.is_file():
        raise IoFailure(f"no such score file: {path}")
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(ScoreRecord.from_json(line))
    return out
