"""Deterministic Louvain community detection for weighted co-occurrence graphs.

The sweep visits nodes in dense-index order and ties in modularity gain are
broken toward the lowest candidate community id, so a given graph always
yields the same partition. The seed is recorded in the result for provenance
but does not influence the algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph
from .graphs import CoocGraph

_EPS = 1e-12


@dataclass
class CommunityPartition:
    """Entity name -> community id, plus the modularity of the partition."""

    communities: dict[str, int]
    modularity: float
    resolution: float
    seed: int

    def n_communities(self) -> int:
        return len(set(self.communities.values()))


def modularity(graph: CoocGraph, communities: dict[str, int], resolution: float = 1.0) -> float:
    """Weighted modularity sum(intra_c/m - resolution * (deg_c/2m)^2)."""
    m = graph.total_weight
    if m == 0:
        return 0.0
    intra: dict[int, float] = {}
    deg: dict[int, float] = {}
    for name, idx in graph.node_ids.items():
        c = communities[name]
        deg[c] = deg.get(c, 0.0) + float(graph.degrees[idx])
    for i, j, w in graph.iter_edges():
        ci = communities[graph.names[i]]
        cj = communities[graph.names[j]]
        if ci == cj:
            intra[ci] = intra.get(ci, 0.0) + w
    q = 0.0
    for c, d in deg.items():
        q += intra.get(c, 0.0) / m - resolution * (d / (2.0 * m)) ** 2
    return q


def _local_move(
    neighbors: list[dict[int, float]],
    k: np.ndarray,
    two_m: float,
    resolution: float,
) -> tuple[list[int], bool]:
    n = len(neighbors)
    comm = list(range(n))
    comm_tot = k.astype(np.float64).copy()
    moved_any = False
    while True:
        moved = False
        for i in range(n):
            c_old = comm[i]
            links: dict[int, float] = {}
            for j, w in neighbors[i].items():
                c = comm[j]
                links[c] = links.get(c, 0.0) + w
            comm_tot[c_old] -= k[i]
            stay_gain = links.get(c_old, 0.0) - resolution * k[i] * comm_tot[c_old] / two_m
            best_c = c_old
            best_gain = stay_gain
            for c in sorted(links):
                if c == c_old:
                    continue
                gain = links[c] - resolution * k[i] * comm_tot[c] / two_m
                if gain > best_gain + _EPS or (abs(gain - best_gain) <= _EPS and c < best_c):
                    # Movement requires a strict improvement over staying;
                    # ties between movable candidates go to the lowest id.
                    if gain > stay_gain + _EPS:
                        best_gain = gain
                        best_c = c
            comm[i] = best_c
            comm_tot[best_c] += k[i]
            if best_c != c_old:
                moved = True
                moved_any = True
        if not moved:
            return comm, moved_any


def _renumber(comm: list[int]) -> tuple[list[int], int]:
    mapping: dict[int, int] = {}
    out = []
    for c in comm:
        if c not in mapping:
            mapping[c] = len(mapping)
        out.append(mapping[c])
    return out, len(mapping)


def _aggregate(
    neighbors: list[dict[int, float]],
    loops: np.ndarray,
    comm: list[int],
    n_comm: int,
) -> tuple[list[dict[int, float]], np.ndarray]:
    meta: list[dict[int, float]] = [dict() for _ in range(n_comm)]
    meta_loops = np.zeros(n_comm, dtype=np.float64)
    for i, nbrs in enumerate(neighbors):
        ci = comm[i]
        meta_loops[ci] += loops[i]
        for j, w in nbrs.items():
            if j <= i:
                continue
            cj = comm[j]
            if ci == cj:
                meta_loops[ci] += w
            else:
                meta[ci][cj] = meta[ci].get(cj, 0.0) + w
                meta[cj][ci] = meta[cj].get(ci, 0.0) + w
    return meta, meta_loops


def detect_communities(graph: CoocGraph, resolution: float = 1.0, seed: int = 0) -> CommunityPartition:
    """Partition a co-occurrence graph, reporting the achieved modularity."""
    if graph.n_nodes == 0:
        raise EmptyGraph("cannot detect communities on a graph with no nodes")
    n = graph.n_nodes
    if graph.total_weight == 0:
        communities = {name: i for i, name in enumerate(graph.names)}
        return CommunityPartition(communities, 0.0, resolution, seed)

    neighbors: list[dict[int, float]] = [dict() for _ in range(n)]
    for i, j, w in graph.iter_edges():
        neighbors[i][j] = float(w)
        neighbors[j][i] = float(w)
    loops = np.zeros(n, dtype=np.float64)
    two_m = 2.0 * graph.total_weight

    node_to_final = list(range(n))
    while True:
        k = np.array(
            [sum(nbrs.values()) + 2.0 * loops[i] for i, nbrs in enumerate(neighbors)],
            dtype=np.float64,
        )
        comm, moved = _local_move(neighbors, k, two_m, resolution)
        comm, n_comm = _renumber(comm)
        if not moved:
            break
        node_to_final = [comm[c] for c in node_to_final]
        neighbors, loops = _aggregate(neighbors, loops, comm, n_comm)
        if n_comm == len(comm):
            break

    final, _ = _renumber(node_to_final)
    communities = {name: final[i] for i, name in enumerate(graph.names)}
    q = modularity(graph, communities, resolution)
    return CommunityPartition(communities, q, resolution, seed)
