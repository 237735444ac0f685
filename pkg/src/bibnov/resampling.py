"""Year-stratified reference shuffling: the null model behind atypicality.

For a focal year, every (document, reference) occurrence is grouped by the
cited work's publication year. A sample permutes entity labels uniformly
within each stratum, so each document keeps its count of references per
reference-year while the labels circulate. Occurrences without a year (and
all keyword occurrences) form a single dedicated stratum.

Each (master_seed, sample_index, stratum) triple derives an independent RNG
stream through a fixed mixing rule, so samples can be drawn in any order, on
any worker, with identical results.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._util import parallel_map
from .corpus import DocumentRecord
from .errors import InvalidParams, NoDocuments
from .graphs import CoocGraph, check_entity_kind, entity_occurrences

logger = logging.getLogger(__name__)

# Stratum tokens must be non-negative for seed derivation; years are shifted
# and the missing-year stratum gets a sentinel far outside the year range.
_YEAR_SHIFT = 1 << 21
_MISSING_TOKEN = 1 << 40


@dataclass(frozen=True)
class Stratum:
    """One reference-year stratum: parallel arrays of document slots and labels."""

    year: int | None
    slots: np.ndarray          # int32 document positions, one per occurrence
    labels: tuple[str, ...]    # observed entity label per slot


@dataclass
class ResamplePlan:
    focal_year: int
    entity_kind: str
    sample_count: int
    master_seed: int
    doc_ids: tuple[str, ...]
    strata: tuple[Stratum, ...]  # years ascending, missing-year stratum last

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def total_permutations(self, limit: float = math.inf) -> float:
        """Product of per-stratum factorials, saturating at ``limit``."""
        total = 1.0
        for stratum in self.strata:
            total *= math.factorial(len(stratum.labels))
            if total > limit:
                return math.inf
        return total


def build_plan(
    docs: Sequence[DocumentRecord],
    entity_kind: str,
    sample_count: int,
    master_seed: int,
    focal_year: int | None = None,
) -> ResamplePlan:
    """Stratify the documents' entity occurrences by reference year.

    ``docs`` must already be in the corpus iteration order (sorted by id);
    slot order inside each stratum follows that document order.
    """
    check_entity_kind(entity_kind)
    if sample_count < 1:
        raise InvalidParams("sample_count must be >= 1")
    if not docs:
        raise NoDocuments("cannot build a resampling plan for an empty year")
    per_year: dict[int | None, tuple[list[int], list[str]]] = {}
    for pos, doc in enumerate(docs):
        for entity, year in entity_occurrences(doc, entity_kind):
            slots, labels = per_year.setdefault(year, ([], []))
            slots.append(pos)
            labels.append(entity)
    keys = sorted((y for y in per_year if y is not None))
    if None in per_year:
        keys.append(None)
    strata = tuple(
        Stratum(
            year=y,
            slots=np.array(per_year[y][0], dtype=np.int32),
            labels=tuple(per_year[y][1]),
        )
        for y in keys
    )
    return ResamplePlan(
        focal_year=focal_year if focal_year is not None else docs[0].year,
        entity_kind=entity_kind,
        sample_count=sample_count,
        master_seed=master_seed,
        doc_ids=tuple(d.id for d in docs),
        strata=strata,
    )


def _stratum_rng(master_seed: int, sample_index: int, year: int | None) -> np.random.Generator:
    token = _MISSING_TOKEN if year is None else year + _YEAR_SHIFT
    if token < 0:
        raise InvalidParams(f"stratum year {year} out of supported range")
    entropy = (master_seed & 0xFFFFFFFFFFFFFFFF, sample_index, token)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def _stratum_perm(plan: ResamplePlan, sample_index: int, stratum: Stratum) -> np.ndarray:
    rng = _stratum_rng(plan.master_seed, sample_index, stratum.year)
    return rng.permutation(len(stratum.labels))


def draw_sample(plan: ResamplePlan, sample_index: int) -> list[list[str]]:
    """Per-document entity multisets for one shuffled world.

    Within each stratum the label multiset is permuted uniformly across slots;
    per-document per-stratum counts are unchanged by construction. Output
    preserves multiplicity; deduplication is the scorer's job.
    """
    if not 0 <= sample_index < plan.sample_count:
        raise InvalidParams(f"sample_index {sample_index} outside 0..{plan.sample_count - 1}")
    out: list[list[str]] = [[] for _ in range(plan.n_docs)]
    for stratum in plan.strata:
        perm = _stratum_perm(plan, sample_index, stratum)
        for k, slot in enumerate(stratum.slots):
            out[slot].append(stratum.labels[perm[k]])
    return out


@dataclass
class EdgeStats:
    """Per-edge resample mean and population std beside the observed weight.

    Keys are node-index pairs (i < j) in the observed graph's dense indexing;
    the table covers the union of edges seen in any sample or in the observed
    graph (absent occurrences count as zero when averaging).
    """

    sample_count: int
    master_seed: int
    graph: CoocGraph
    mean: dict[tuple[int, int], float]
    std: dict[tuple[int, int], float]
    observed: dict[tuple[int, int], int]


def _sample_weights(
    plan: ResamplePlan,
    codes: list[np.ndarray],
    n_docs: int,
    sample_index: int,
) -> dict[tuple[int, int], int]:
    """Edge weights of one shuffled world, applying the binary per-document contract."""
    per_doc: list[list[int]] = [[] for _ in range(n_docs)]
    for stratum, stratum_codes in zip(plan.strata, codes):
        perm = _stratum_perm(plan, sample_index, stratum)
        shuffled = stratum_codes[perm]
        slots = stratum.slots
        for k in range(len(slots)):
            per_doc[slots[k]].append(int(shuffled[k]))
    weights: dict[tuple[int, int], int] = {}
    for ents in per_doc:
        if len(ents) < 2:
            continue
        distinct = sorted(set(ents))
        for pair in itertools.combinations(distinct, 2):
            weights[pair] = weights.get(pair, 0) + 1
    return weights


def resample_stats(plan: ResamplePlan, graph: CoocGraph, threads: int = 1) -> EdgeStats:
    """Aggregate the s shuffled worlds into per-edge mean and population std.

    The population convention (divide by s) is part of the z-score contract.
    Sample draws are independent given their derived seeds; the merge is an
    order-independent integer summation, so results do not depend on threads.
    """
    codes = [
        np.array([graph.node_ids[label] for label in stratum.labels], dtype=np.int64)
        for stratum in plan.strata
    ]
    s = plan.sample_count
    results = parallel_map(
        lambda k: _sample_weights(plan, codes, plan.n_docs, k), range(s), threads=threads
    )
    sums: dict[tuple[int, int], int] = {}
    sq_sums: dict[tuple[int, int], int] = {}
    for weights in results:
        for pair, w in weights.items():
            sums[pair] = sums.get(pair, 0) + w
            sq_sums[pair] = sq_sums.get(pair, 0) + w * w
    observed = {(i, j): w for i, j, w in graph.iter_edges()}
    mean: dict[tuple[int, int], float] = {}
    std: dict[tuple[int, int], float] = {}
    for pair in sums.keys() | observed.keys():
        total = sums.get(pair, 0)
        sq = sq_sums.get(pair, 0)
        m = total / s
        var = sq / s - m * m
        mean[pair] = m
        std[pair] = math.sqrt(var) if var > 0 else 0.0
    return EdgeStats(
        sample_count=s,
        master_seed=plan.master_seed,
        graph=graph,
        mean=mean,
        std=std,
        observed={pair: observed.get(pair, 0) for pair in mean},
    )
