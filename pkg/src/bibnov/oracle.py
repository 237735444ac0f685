"""Naive, obviously-correct recomputations of every indicator.

Everything here is written for legibility over speed: dense matrices, explicit
loops, a private percentile routine. The only parts shared with the engine
are corpus parsing and, for the atypicality null model beyond the enumeration
limit, the seeded sample draws themselves (the counting and statistics stay
independent). Guarded to small corpora.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .corpus import CorpusStore
from .errors import CorpusTooLarge
from .semantic import EmbeddingStore

SIZE_GUARD = 500
ENUMERATION_LIMIT = 10**6


@dataclass
class OracleResult:
    indicator: str
    scores: dict[str, dict[str, float | None]]
    artifacts: dict = field(default_factory=dict)


def _guard(store: CorpusStore, size_guard: int = SIZE_GUARD) -> None:
    if len(store.documents) > size_guard:
        raise CorpusTooLarge(f"{len(store.documents)} documents exceeds oracle guard {size_guard}")


def oracle_percentile(values, q: float) -> float:
    """Linear interpolation between closest ranks, written from scratch."""
    vals = sorted(values)
    n = len(vals)
    if n == 0:
        raise ValueError("empty distribution")
    h = (n - 1) * q / 100.0
    lo = math.floor(h)
    hi = math.ceil(h)
    return vals[lo] + (vals[hi] - vals[lo]) * (h - lo)


def _doc_entities(doc, entity_kind: str) -> list[str]:
    if entity_kind == "journals":
        ents = {r.source for r in doc.references if r.source is not None}
    else:
        ents = set(doc.keywords)
    return sorted(ents)


def _doc_pairs(doc, entity_kind: str) -> list[tuple[str, str]]:
    ents = _doc_entities(doc, entity_kind)
    pairs = []
    for a in range(len(ents)):
        for b in range(a + 1, len(ents)):
            pairs.append((ents[a], ents[b]))
    return pairs


def _docs_of_year(store: CorpusStore, t: int):
    return sorted((d for d in store.documents.values() if d.year == t), key=lambda d: d.id)


def _docs_in_span(store: CorpusStore, lo: int, hi: int):
    return sorted(
        (d for d in store.documents.values() if lo <= d.year <= hi), key=lambda d: d.id
    )


def _dense_cooc(docs, entity_kind: str):
    """Names, dense weight matrix, weighted degrees and total weight N."""
    names = sorted({e for d in docs for e in _doc_entities(d, entity_kind)})
    index = {n: i for i, n in enumerate(names)}
    v = len(names)
    m = [[0] * v for _ in range(v)]
    for doc in docs:
        for a, b in _doc_pairs(doc, entity_kind):
            i, j = index[a], index[b]
            m[i][j] += 1
            m[j][i] += 1
    degrees = [sum(row) for row in m]
    total = sum(m[i][j] for i in range(v) for j in range(i + 1, v))
    return names, index, m, degrees, total


def oracle_lee(store: CorpusStore, entity_kind: str, t: int) -> OracleResult:
    _guard(store)
    docs = _docs_of_year(store, t)
    names, index, m, degrees, total = _dense_cooc(docs, entity_kind)
    edge_table: dict[tuple[str, str], float] = {}
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if m[i][j] > 0:
                edge_table[(names[i], names[j])] = m[i][j] * total / (degrees[i] * degrees[j])
    scores = {}
    for doc in docs:
        pairs = _doc_pairs(doc, entity_kind)
        if not pairs:
            continue
        vals = [edge_table[p] for p in pairs]
        scores[doc.id] = {"commonness": -math.log(oracle_percentile(vals, 10))}
    return OracleResult("lee", scores, artifacts={"edge_table": edge_table})


# --- atypicality -----------------------------------------------------------


def _strata(docs, entity_kind: str) -> dict:
    """reference-year -> parallel (doc position, label) lists, missing year last."""
    per_year: dict = {}
    for pos, doc in enumerate(docs):
        if entity_kind == "journals":
            occurrences = [(r.source, r.year) for r in doc.references if r.source is not None]
        else:
            occurrences = [(kw, None) for kw in doc.keywords]
        for label, year in occurrences:
            per_year.setdefault(year, []).append((pos, label))
    keys = sorted((y for y in per_year if y is not None))
    if None in per_year:
        keys.append(None)
    return {y: per_year[y] for y in keys}


def stratum_permutation_total(strata: dict, limit: float = math.inf) -> float:
    total = 1.0
    for occurrences in strata.values():
        total *= math.factorial(len(occurrences))
        if total > limit:
            return math.inf
    return total


def _count_world(n_docs: int, assignments) -> dict[tuple[str, str], int]:
    """Pair weights of one shuffled world given (doc position, label) assignments."""
    per_doc: list[list[str]] = [[] for _ in range(n_docs)]
    for pos, label in assignments:
        per_doc[pos].append(label)
    weights: dict[tuple[str, str], int] = {}
    for labels in per_doc:
        distinct = sorted(set(labels))
        for a in range(len(distinct)):
            for b in range(a + 1, len(distinct)):
                key = (distinct[a], distinct[b])
                weights[key] = weights.get(key, 0) + 1
    return weights


def oracle_exact_edge_stats(
    store: CorpusStore, entity_kind: str, t: int, limit: float = ENUMERATION_LIMIT
):
    """Exact per-edge (mean, std, fourth central moment) over all stratum
    permutations, or None beyond the enumeration limit."""
    docs = _docs_of_year(store, t)
    strata = _strata(docs, entity_kind)
    total = stratum_permutation_total(strata, limit)
    if math.isinf(total):
        return None
    total = int(total)
    raw: dict[tuple[str, str], list[float]] = {}
    stratum_items = list(strata.values())
    positions = [[pos for pos, _ in items] for items in stratum_items]
    labels = [[label for _, label in items] for items in stratum_items]
    for combo in itertools.product(*(itertools.permutations(ls) for ls in labels)):
        assignments = []
        for stratum_positions, stratum_labels in zip(positions, combo):
            assignments.extend(zip(stratum_positions, stratum_labels))
        for pair, w in _count_world(len(docs), assignments).items():
            acc = raw.setdefault(pair, [0.0, 0.0, 0.0, 0.0])
            acc[0] += w
            acc[1] += w * w
            acc[2] += w ** 3
            acc[3] += w ** 4
    stats = {}
    for pair, (s1, s2, s3, s4) in raw.items():
        mu = s1 / total
        var = s2 / total - mu * mu
        # Central fourth moment from raw moments (absent worlds contribute w=0,
        # already implicit since all sums skip only zero weights).
        m4 = s4 / total - 4 * mu * s3 / total + 6 * mu * mu * s2 / total - 3 * mu ** 4
        stats[pair] = (mu, math.sqrt(var) if var > 0 else 0.0, max(m4, 0.0))
    return stats


def _sampled_edge_stats(store: CorpusStore, entity_kind: str, t: int, samples: int, seed: int):
    """Recount the engine's seeded sample draws with independent counting code."""
    from .resampling import build_plan, draw_sample

    docs = _docs_of_year(store, t)
    plan = build_plan(docs, entity_kind, samples, seed, focal_year=t)
    sums: dict[tuple[str, str], float] = {}
    sq_sums: dict[tuple[str, str], float] = {}
    for k in range(samples):
        worlds = draw_sample(plan, k)
        weights: dict[tuple[str, str], int] = {}
        for labels in worlds:
            distinct = sorted(set(labels))
            for a in range(len(distinct)):
                for b in range(a + 1, len(distinct)):
                    key = (distinct[a], distinct[b])
                    weights[key] = weights.get(key, 0) + 1
        for pair, w in weights.items():
            sums[pair] = sums.get(pair, 0.0) + w
            sq_sums[pair] = sq_sums.get(pair, 0.0) + w * w
    stats = {}
    for pair, s in sums.items():
        mean = s / samples
        var = sq_sums[pair] / samples - mean * mean
        stats[pair] = (mean, math.sqrt(var) if var > 0 else 0.0)
    return stats


def oracle_uzzi(
    store: CorpusStore,
    entity_kind: str,
    t: int,
    samples: int,
    seed: int,
    enumeration_limit: float = ENUMERATION_LIMIT,
) -> OracleResult:
    _guard(store)
    docs = _docs_of_year(store, t)
    names, index, m, degrees, total = _dense_cooc(docs, entity_kind)
    stats = oracle_exact_edge_stats(store, entity_kind, t, enumeration_limit)
    mode = "enumeration"
    if stats is None:
        stats = _sampled_edge_stats(store, entity_kind, t, samples, seed)
        mode = "sampled"
    z_table: dict[tuple[str, str], float | None] = {}
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if m[i][j] == 0:
                continue
            pair = (names[i], names[j])
            mean, std = stats.get(pair, (0.0, 0.0))[:2]
            if std > 0:
                z_table[pair] = (m[i][j] - mean) / std
            elif m[i][j] == mean:
                z_table[pair] = 0.0
            else:
                z_table[pair] = None  # degenerate: excluded from distributions
    scores = {}
    for doc in docs:
        pairs = _doc_pairs(doc, entity_kind)
        if not pairs:
            continue
        z_vals = [z_table[p] for p in pairs if z_table[p] is not None]
        if z_vals:
            scores[doc.id] = {
                "novelty": oracle_percentile(z_vals, 10),
                "conventionality": oracle_percentile(z_vals, 50),
            }
        else:
            scores[doc.id] = {"novelty": None, "conventionality": None}
    return OracleResult("uzzi", scores, artifacts={"z_table": z_table, "stats": stats, "mode": mode})


def oracle_foster(
    store: CorpusStore, entity_kind: str, t: int, communities: dict[str, int]
) -> OracleResult:
    """Bridging given a community assignment (the partition is an input here;
    the detection algorithm is validated separately against brute force)."""
    _guard(store)
    scores = {}
    for doc in _docs_of_year(store, t):
        pairs = _doc_pairs(doc, entity_kind)
        if not pairs:
            continue
        outside = 0
        for a, b in pairs:
            if communities[a] != communities[b]:
                outside += 1
        scores[doc.id] = {"bridging": outside / len(pairs)}
    return OracleResult("foster", scores)


def oracle_wang(
    store: CorpusStore, entity_kind: str, t: int, backward: int, forward: int, reuse: int
) -> OracleResult:
    _guard(store)
    y0 = min(d.year for d in store.documents.values())
    yn = max(d.year for d in store.documents.values())
    names = sorted({e for d in store.documents.values() for e in _doc_entities(d, entity_kind)})
    index = {n: i for i, n in enumerate(names)}
    v = len(names)

    def dense(lo, hi):
        m = [[0] * v for _ in range(v)]
        for doc in _docs_in_span(store, lo, hi):
            for a, b in _doc_pairs(doc, entity_kind):
                i, j = index[a], index[b]
                m[i][j] += 1
                m[j][i] += 1
        return m

    m_t = dense(t, t)
    m_p = dense(y0, t - 1)
    m_f = dense(t + 1, min(t + forward, yn))
    m_b = dense(max(t - backward, y0), t - 1)

    def norm(row):
        return math.sqrt(sum(x * x for x in row))

    contributions: dict[tuple[str, str], float] = {}
    for i in range(v):
        for j in range(i + 1, v):
            if m_t[i][j] > 0 and m_f[i][j] >= reuse and m_p[i][j] == 0:
                ni, nj = norm(m_b[i]), norm(m_b[j])
                if ni == 0.0 or nj == 0.0:
                    cos = 0.0
                else:
                    cos = sum(x * y for x, y in zip(m_b[i], m_b[j])) / (ni * nj)
                contributions[(names[i], names[j])] = 1.0 - cos
    scores = {}
    for doc in _docs_of_year(store, t):
        pairs = _doc_pairs(doc, entity_kind)
        if not pairs:
            continue
        scores[doc.id] = {"novelty": sum(contributions.get(p, 0.0) for p in pairs)}
    return OracleResult("wang", scores, artifacts={"contributions": contributions})


def oracle_semantic(
    store: CorpusStore,
    embeddings: EmbeddingStore,
    field: str,
    q: float,
    year: int | None = None,
) -> OracleResult:
    _guard(store)
    attr = "title_vector_id" if field == "title" else "abstract_vector_id"
    scores = {}
    doc_ids = sorted(store.documents)
    for doc_id in doc_ids:
        doc = store.documents[doc_id]
        if year is not None and doc.year != year:
            continue
        vectors = []
        for ref in doc.references:
            if ref.ref_id is None or ref.ref_id not in store.documents:
                continue
            vec = embeddings.vectors.get(getattr(store.documents[ref.ref_id], attr) or "")
            if vec is not None:
                vectors.append([float(x) for x in vec])
        if len(vectors) < 2:
            continue
        distances = []
        for a in range(len(vectors)):
            for b in range(a + 1, len(vectors)):
                u, w = vectors[a], vectors[b]
                nu = math.sqrt(sum(x * x for x in u))
                nw = math.sqrt(sum(x * x for x in w))
                if nu == 0.0 or nw == 0.0:
                    distances.append(1.0)
                else:
                    dot = sum(x * y for x, y in zip(u, w))
                    distances.append(1.0 - dot / (nu * nw))
        scores[doc.id] = {"novelty": oracle_percentile(distances, q)}
    return OracleResult("shibayama", scores)


def oracle_disruption(
    store: CorpusStore, l_values: tuple[int, ...] = (1, 5), year: int | None = None
) -> OracleResult:
    _guard(store)
    doc_ids = sorted(store.documents)
    refs_of: dict[str, set[str]] = {}
    for doc_id in doc_ids:
        doc = store.documents[doc_id]
        refs_of[doc_id] = {
            r.ref_id
            for r in doc.references
            if r.ref_id is not None and r.ref_id != doc_id and r.ref_id in store.documents
        }
    scores = {}
    for fp in doc_ids:
        if year is not None and store.documents[fp].year != year:
            continue
        citers = [d for d in doc_ids if fp in refs_of[d]]
        n = len(citers)
        values: dict[str, float | None] = {}
        shared_total = 0
        j_counts = {l: 0 for l in l_values}
        for c in citers:
            shared = len(refs_of[c] & refs_of[fp])
            shared_total += shared
            for l in l_values:
                if shared >= l:
                    j_counts[l] += 1
        k = 0
        for v in doc_ids:
            if v == fp or fp in refs_of[v]:
                continue
            if refs_of[v] & refs_of[fp]:
                k += 1
        for l in l_values:
            j = j_counts[l]
            i = n - j
            values[f"di{l}"] = (i - j) / (i + j + k) if (i + j + k) > 0 else None
            values[f"dinok{l}"] = (i - j) / (i + j) if n > 0 else None
        if n > 0:
            citer_set = set(citers)
            deep = sum(1 for c in citers if refs_of[c] & citer_set)
            values["depth"] = deep / n
            values["breadth"] = 1.0 - deep / n
            values["dependence"] = shared_total / n
            values["independence"] = (values["dinok1"] + 1.0) / 2.0
        else:
            values["depth"] = values["breadth"] = values["dependence"] = values["independence"] = None
        scores[fp] = values
    return OracleResult("disruption", scores)


# --- community detection cross-check ----------------------------------------


def oracle_modularity(matrix, communities: list[int], resolution: float = 1.0) -> float:
    v = len(matrix)
    m = sum(matrix[i][j] for i in range(v) for j in range(i + 1, v))
    if m == 0:
        return 0.0
    q = 0.0
    for i in range(v):
        for j in range(i + 1, v):
            if communities[i] == communities[j]:
                q += matrix[i][j] / m
    degs: dict[int, float] = {}
    for i in range(v):
        degs[communities[i]] = degs.get(communities[i], 0.0) + sum(matrix[i])
    for d in degs.values():
        q -= resolution * (d / (2.0 * m)) ** 2
    return q


def _set_partitions(n: int):
    """All partitions of range(n) as community-label lists."""
    if n == 0:
        yield []
        return

    def rec(i, labels, n_used):
        if i == n:
            yield list(labels)
            return
        for c in range(n_used + 1):
            labels.append(c)
            yield from rec(i + 1, labels, max(n_used, c + 1))
            labels.pop()

    yield from rec(0, [], 0)


def oracle_best_partition(matrix, resolution: float = 1.0):
    """Exhaustive modularity maximization; only feasible for <= 8 nodes."""
    v = len(matrix)
    if v > 8:
        raise CorpusTooLarge(f"{v} nodes exceeds brute-force partition bound")
    best_q = -math.inf
    best = None
    for labels in _set_partitions(v):
        q = oracle_modularity(matrix, labels, resolution)
        if q > best_q + 1e-15:
            best_q = q
            best = labels
    return best, best_q


def oracle_score(indicator: str, store: CorpusStore, params: dict) -> OracleResult:
    """Dispatcher mirroring the engine's indicator surface."""
    if indicator == "lee":
        return oracle_lee(store, params["entity_kind"], params["year"])
    if indicator == "uzzi":
        return oracle_uzzi(
            store,
            params["entity_kind"],
            params["year"],
            params.get("samples", 20),
            params.get("seed", 0),
            params.get("enumeration_limit", ENUMERATION_LIMIT),
        )
    if indicator == "foster":
        return oracle_foster(store, params["entity_kind"], params["year"], params["communities"])
    if indicator == "wang":
        return oracle_wang(
            store,
            params["entity_kind"],
            params["year"],
            params.get("backward", 3),
            params.get("forward", 3),
            params.get("reuse", 1),
        )
    if indicator == "shibayama":
        return oracle_semantic(
            store, params["embeddings"], params.get("field", "title"), params.get("q", 10),
            params.get("year"),
        )
    if indicator == "disruption":
        return oracle_disruption(store, params.get("l_values", (1, 5)), params.get("year"))
    raise ValueError(f"unknown indicator: {indicator}")
