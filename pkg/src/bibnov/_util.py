"""Shared helpers: string normalization, percentiles, hashing, deterministic parallel map."""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

# Percentile grid attached to score records.
PERCENTILE_GRID = (1, 5, 10, 25, 50, 75, 90, 95, 99)


def normalize_token(s: str, casefold: bool = True) -> str:
    """Trim, collapse internal whitespace, and optionally case-fold an entity string."""
    s = " ".join(s.split())
    return s.casefold() if casefold else s


def percentile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation percentile of a non-empty multiset."""
    if len(values) == 0:
        raise ValueError("percentile of empty multiset")
    return float(np.percentile(np.asarray(values, dtype=np.float64), q))


def percentile_vector(values: Sequence[float]) -> dict[str, float]:
    arr = np.asarray(values, dtype=np.float64)
    out = np.percentile(arr, PERCENTILE_GRID)
    return {f"p{q}": float(v) for q, v in zip(PERCENTILE_GRID, out)}


def canonical_json(obj: Any) -> str:
    """Compact JSON with insertion-ordered keys; floats use repr round-trip formatting."""
    return json.dumps(obj, ensure_ascii=True, separators=(",", ":"))


def params_fingerprint(params: dict) -> str:
    """Stable short digest of a parameter mapping."""
    blob = json.dumps(params, ensure_ascii=True, separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Map preserving input order. threads <= 1 runs serially; results never depend on threads."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def resolve_threads(threads: int) -> int:
    """0 means auto; negative is invalid."""
    import os

    if threads < 0:
        raise ValueError("threads must be >= 0")
    return threads if threads > 0 else (os.cpu_count() or 1)
