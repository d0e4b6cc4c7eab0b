"""Sentence similarity networks: k-NN graphs under cosine similarity.

Each node selects its k most similar other nodes (ties broken toward the
lower index) and the edge set is the symmetric union of the selections.
``min_k_connected`` finds the smallest k whose graph is a single connected
component; since the edge set only grows with k, the search unions edges
incrementally instead of rebuilding the graph per k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .embed import SentenceVector
from .errors import InvalidK, ParseError, ZeroNorm

__all__ = [
    "SimilarityGraph",
    "cosine",
    "knn_graph",
    "min_k_connected",
    "write_edgelist",
    "read_edgelist",
]

_BLOCK_ROWS = 512


@dataclass
class SimilarityGraph:
    """Undirected graph over sentence nodes with cosine weights."""

    n: int
    edges: list[tuple[int, int, float]]  # (i, j, weight) with i < j, sorted
    k_used: int

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj = self.adjacency()
        seen = np.zeros(self.n, dtype=bool)
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    count += 1
                    stack.append(u)
        return count == self.n


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity dot(u,v)/(|u||v|), clamped to [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroNorm("cosine undefined for zero vector")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def _as_matrix(vectors: Union[Sequence[SentenceVector], np.ndarray]) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        mat = np.asarray(vectors, dtype=np.float64)
    else:
        mat = np.stack([np.asarray(v.vector, dtype=np.float64) for v in vectors])
    if mat.ndim != 2:
        raise ValueError("expected a 2-D array of vectors")
    return mat


def _unit_rows(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(mat, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroNorm(f"zero-norm vector at index {int(zero[0])}")
    return mat / norms[:, None], norms


def _ranked_neighbors(unit: np.ndarray, cap: int) -> np.ndarray:
    """For each row, the indices of the `cap` most similar other rows.

    Ties are broken toward the lower index (stable sort on descending
    similarity). Computed block-wise so the full S x S matrix never needs to
    be held for large S.
    """
    n = unit.shape[0]
    ranked = np.empty((n, cap), dtype=np.int64)
    for lo in range(0, n, _BLOCK_ROWS):
        hi = min(lo + _BLOCK_ROWS, n)
        sims = unit[lo:hi] @ unit.T
        sims[np.arange(hi - lo), np.arange(lo, hi)] = -np.inf  # exclude self
        order = np.argsort(-sims, axis=1, kind="stable")
        ranked[lo:hi] = order[:, :cap]
    return ranked


def _graph_from_ranked(mat: np.ndarray, ranked: np.ndarray, k: int) -> SimilarityGraph:
    n = mat.shape[0]
    pairs = set()
    for i in range(n):
        for j in ranked[i, :k]:
            pairs.add((i, int(j)) if i < j else (int(j), i))
    # weights recomputed with the scalar formula so they equal cosine() exactly
    edges = [(i, j, cosine(mat[i], mat[j])) for i, j in sorted(pairs)]
    return SimilarityGraph(n=n, edges=edges, k_used=k)


def knn_graph(
    vectors: Union[Sequence[SentenceVector], np.ndarray], k: int
) -> SimilarityGraph:
    """Symmetric-union k-NN graph under cosine similarity."""
    mat = _as_matrix(vectors)
    n = mat.shape[0]
    if n < 2:
        raise InvalidK("need at least 2 vectors")
    if not 1 <= k <= n - 1:
        raise InvalidK(f"k={k} outside valid range 1..{n - 1}")
    unit, _ = _unit_rows(mat)
    ranked = _ranked_neighbors(unit, k)
    return _graph_from_ranked(mat, ranked, k)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.components = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
            self.components -= 1


def min_k_connected(
    vectors: Union[Sequence[SentenceVector], np.ndarray]
) -> tuple[int, SimilarityGraph]:
    """Smallest k in 1..S-1 whose k-NN graph is connected, plus that graph.

    Edge sets are monotone in k, so edges are unioned column by column into a
    union-find structure; the scan stops at the first k with one component
    (k = S-1 gives the complete graph, so the scan always terminates).
    """
    mat = _as_matrix(vectors)
    n = mat.shape[0]
    if n < 2:
        raise InvalidK("need at least 2 vectors")
    unit, _ = _unit_rows(mat)

    cap = min(n - 1, 16)
    ranked = _ranked_neighbors(unit, cap)
    uf = _UnionFind(n)
    k_used = n - 1
    for k in range(1, n):
        if k > cap:
            cap = min(n - 1, cap * 2)
            ranked = _ranked_neighbors(unit, cap)
        col = ranked[:, k - 1]
        for i in range(n):
            uf.union(i, int(col[i]))
        if uf.components == 1:
            k_used = k
            break
    return k_used, _graph_from_ranked(mat, ranked, k_used)


def write_edgelist(graph: SimilarityGraph, path) -> None:
    """Edge-list text export: header "S k_used", then "i j weight" lines."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{graph.n} {graph.k_used}\n")
        for i, j, w in graph.edges:
            fh.write(f"{i} {j} {w:.9g}\n")


def read_edgelist(path) -> SimilarityGraph:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError("expected header 'S k_used'", line=1)
        n, k_used = int(header[0]), int(header[1])
        edges = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("expected 'i j weight'", line=lineno)
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
    return SimilarityGraph(n=n, edges=edges, k_used=k_used)
