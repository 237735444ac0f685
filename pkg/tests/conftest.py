"""Shared corpus builders for the test suite."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from bibnov.corpus import CorpusStore, parse_document
from bibnov.validation import as_corpus


def raw_doc(doc_id, year, sources=(), keywords=(), refs=None, **extra):
    """Raw input record; ``sources`` is shorthand for source-only references."""
    references = list(refs) if refs is not None else []
    references += [{"source": s} for s in sources]
    record = {"id": doc_id, "year": year, "references": references, "keywords": list(keywords)}
    record.update(extra)
    return record


def store_from_raw(raws) -> CorpusStore:
    return as_corpus([parse_document(raw) for raw in raws])


def write_corpus(path: Path, raws) -> Path:
    path.write_text("\n".join(json.dumps(r) for r in raws) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def lee5_store():
    """Five-document year whose commonness table is {0.9375, 0.625, 0.625}."""
    return store_from_raw(
        [
            raw_doc("p1", 2004, sources=["A", "B"]),
            raw_doc("p2", 2004, sources=["A", "B"]),
            raw_doc("p3", 2004, sources=["A", "C"]),
            raw_doc("p4", 2004, sources=["A", "B"]),
            raw_doc("p5", 2004, sources=["B", "C"]),
        ]
    )


@pytest.fixture
def disruption_toy_store():
    """FP refs {R1,R2}; citers C1 {FP}, C2 {FP,R1}; outsider C3 {R2}."""
    return store_from_raw(
        [
            raw_doc("R1", 1998, keywords=["x"]),
            raw_doc("R2", 1998, keywords=["x"]),
            raw_doc("FP", 2000, refs=[{"ref_id": "R1"}, {"ref_id": "R2"}]),
            raw_doc("C1", 2002, refs=[{"ref_id": "FP"}]),
            raw_doc("C2", 2002, refs=[{"ref_id": "FP"}, {"ref_id": "R1"}]),
            raw_doc("C3", 2002, refs=[{"ref_id": "R2"}]),
        ]
    )


@pytest.fixture
def two_cliques_store():
    """Two 3-cliques of journals joined by one weak bridge document."""
    raws = []
    i = 0
    for _ in range(3):
        for group in (["A", "B", "C"], ["X", "Y", "Z"]):
            raws.append(raw_doc(f"d{i:02d}", 2000, sources=group))
            i += 1
    raws.append(raw_doc(f"d{i:02d}", 2000, sources=["C", "X"]))
    return store_from_raw(raws)
