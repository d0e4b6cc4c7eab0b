"""Semantic field detection: modularity and seeded Louvain on the binary graph.

Edges of the similarity graph count as 1 regardless of cosine weight. Louvain
output depends on the node visiting order, so the order is drawn from a
seeded generator and the seed is recorded alongside exports.

The local-moving pass is the hot loop at real book sizes (thousands of
sentences). A compiled kernel is used when the extension built; set
SEMFLOW_PURE=1 to force the pure-Python fallback. Both produce bit-identical
partitions; ``benchmarks/bench_louvain.py`` compares their speed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, PartitionMismatch
from .simnet import SimilarityGraph

if os.environ.get("SEMFLOW_PURE") == "1":
    from . import _louvain_pure as _kernel
else:
    try:
        from . import _louvain_core as _kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _louvain_pure as _kernel  # type: ignore[no-redef]

KERNEL = _kernel.KERNEL

__all__ = [
    "Partition",
    "modularity",
    "louvain",
    "louvain_trace",
    "write_partition",
    "read_partition",
    "KERNEL",
]


@dataclass
class Partition:
    """Node-to-community assignment with ids dense in 0..C-1."""

    assignment: np.ndarray

    @property
    def n_communities(self) -> int:
        return int(self.assignment.max()) + 1 if self.assignment.size else 0

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Canonicalize arbitrary labels: ids by first appearance in node order."""
        labels = np.asarray(labels, dtype=np.int64)
        relabel: dict[int, int] = {}
        dense = np.empty_like(labels)
        for i, lab in enumerate(labels.tolist()):
            if lab not in relabel:
                relabel[lab] = len(relabel)
            dense[i] = relabel[lab]
        return cls(dense)


def modularity(graph: SimilarityGraph, partition: Partition) -> float:
    """Newman modularity of the partition on the binary view of the graph.

    Q = sum_c [ e_c/m - (d_c/(2m))^2 ] with e_c the intra-community edge
    count and d_c the total degree of community c.
    """
    labels = np.asarray(partition.assignment, dtype=np.int64)
    if labels.shape[0] != graph.n:
        raise PartitionMismatch(
            f"partition covers {labels.shape[0]} nodes, graph has {graph.n}"
        )
    m = graph.m
    if m == 0:
        raise ValueError("modularity undefined for a graph with no edges")
    n_comm = int(labels.max()) + 1
    e_c = np.zeros(n_comm, dtype=np.float64)
    d_c = np.zeros(n_comm, dtype=np.float64)
    for i, j, _ in graph.edges:
        ci, cj = labels[i], labels[j]
        d_c[ci] += 1.0
        d_c[cj] += 1.0
        if ci == cj:
            e_c[ci] += 1.0
    return float(np.sum(e_c / m - (d_c / (2.0 * m)) ** 2))


def _csr_binary(graph: SimilarityGraph):
    """Symmetric CSR of the binary view (all weights 1), neighbors ascending."""
    n = graph.n
    deg = np.zeros(n, dtype=np.int64)
    for i, j, _ in graph.edges:
        deg[i] += 1
        deg[j] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int64)
    fill = indptr[:-1].copy()
    for i, j, _ in graph.edges:  # edges sorted by (i, j) -> rows ascending
        indices[fill[i]] = j
        fill[i] += 1
        indices[fill[j]] = i
        fill[j] += 1
    weights = np.ones(indptr[-1], dtype=np.float64)
    return indptr, indices, weights


def _aggregate(indptr, indices, weights, loops, comm, n_new):
    """Collapse communities into nodes, summing weights; intra weight becomes loops."""
    new_loops = np.zeros(n_new, dtype=np.float64)
    for v in range(len(loops)):
        new_loops[comm[v]] += loops[v]
    acc: dict[tuple[int, int], float] = {}
    for v in range(len(loops)):
        cv = comm[v]
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if u <= v:  # each undirected edge once
                continue
            cu = comm[u]
            if cv == cu:
                new_loops[cv] += 2.0 * weights[e]
            else:
                key = (cv, cu) if cv < cu else (cu, cv)
                acc[key] = acc.get(key, 0.0) + weights[e]

    deg = np.zeros(n_new, dtype=np.int64)
    for a, b in acc:
        deg[a] += 1
        deg[b] += 1
    new_indptr = np.zeros(n_new + 1, dtype=np.int64)
    np.cumsum(deg, out=new_indptr[1:])
    new_indices = np.empty(new_indptr[-1], dtype=np.int64)
    new_weights = np.empty(new_indptr[-1], dtype=np.float64)
    fill = new_indptr[:-1].copy()
    for (a, b) in sorted(acc):
        w = acc[(a, b)]
        new_indices[fill[a]] = b
        new_weights[fill[a]] = w
        fill[a] += 1
        new_indices[fill[b]] = a
        new_weights[fill[b]] = w
        fill[b] += 1
    new_degrees = new_loops.copy()
    for v in range(n_new):
        for e in range(new_indptr[v], new_indptr[v + 1]):
            new_degrees[v] += new_weights[e]
    return new_indptr, new_indices, new_weights, new_loops, new_degrees


def louvain_trace(graph: SimilarityGraph, seed: int) -> tuple[Partition, list[list[float]]]:
    """Louvain with the per-pass modularity history of every level.

    The history exists so tests can assert that each local-moving pass is
    non-decreasing in Q; use :func:`louvain` when only the partition matters.
    """
    n = graph.n
    if n < 1:
        raise ValueError("graph has no nodes")
    if graph.m == 0:
        return Partition(np.arange(n, dtype=np.int64)), []

    indptr, indices, weights = _csr_binary(graph)
    loops = np.zeros(n, dtype=np.float64)
    degrees = loops.copy()
    for v in range(n):
        degrees[v] += indptr[v + 1] - indptr[v]
    two_m = float(degrees.sum())

    rng = np.random.Generator(np.random.PCG64(seed))
    mapping = np.arange(n, dtype=np.int64)  # original node -> current-level node
    trace: list[list[float]] = []
    while True:
        size = len(loops)
        order = rng.permutation(size).astype(np.int64)
        comm = np.arange(size, dtype=np.int64)
        in_c = loops.copy()
        tot_c = degrees.copy()
        moves, q_history = _kernel.one_level(
            indptr, indices, weights, loops, degrees, two_m, comm, order, in_c, tot_c
        )
        trace.append([float(q) for q in q_history])
        if moves == 0:
            break
        relabel = np.full(size, -1, dtype=np.int64)
        next_id = 0
        for v in range(size):
            c = comm[v]
            if relabel[c] < 0:
                relabel[c] = next_id
                next_id += 1
        dense = relabel[comm]
        mapping = dense[mapping]
        if next_id == size:
            break
        indptr, indices, weights, loops, degrees = _aggregate(
            indptr, indices, weights, loops, dense, next_id
        )
    return Partition.from_labels(mapping), trace


def louvain(graph: SimilarityGraph, seed: int) -> Partition:
    """Seeded Louvain partition of the similarity graph (binary view)."""
    partition, _ = louvain_trace(graph, seed)
    return partition


def write_partition(partition: Partition, path, seed: int, q: float) -> None:
    """Export "node_index community_id" lines behind a seed/Q/C header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"seed={seed} Q={q:.9g} C={partition.n_communities}\n")
        for i, c in enumerate(partition.assignment.tolist()):
            fh.write(f"{i} {c}\n")


def read_partition(path) -> tuple[Partition, dict]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        meta = {}
        for item in header:
            key, _, value = item.partition("=")
            meta[key] = value
        if not {"seed", "Q", "C"} <= meta.keys():
            raise ParseError("expected header 'seed=.. Q=.. C=..'", line=1)
        labels = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected 'node community'", line=lineno)
            labels.append(int(parts[1]))
    return Partition(np.asarray(labels, dtype=np.int64)), meta
