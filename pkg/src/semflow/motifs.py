"""Directed 2-/3-node motif census of community-transition chains.

The feature space is the 15 isomorphism classes of loop-free weakly connected
digraphs on 2 or 3 nodes: 2 dyads (single arc, reciprocal pair) plus the 13
connected triads. Counting is induced-subgraph style: every 2- and 3-subset
of states contributes to exactly one class (or none, when its induced arcs do
not connect it).

Three counting strategies:
  * ``unweighted``            - every occurrence adds 1 (no thresholding)
  * ``simplified-unweighted`` - drop transitions below the threshold, then add 1
  * ``simplified-weighted``   - drop below threshold, then add the sum of the
                                occurrence's transition probabilities
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .errors import EmptyChain, ExportError, NotAMotif
from .markov import MarkovChain, prune

__all__ = [
    "MotifClass",
    "CATALOG",
    "STRATEGIES",
    "UNWEIGHTED",
    "SIMPLIFIED_UNWEIGHTED",
    "SIMPLIFIED_WEIGHTED",
    "FeatureVector",
    "canonical_class",
    "census",
    "class_name",
    "write_features",
]

UNWEIGHTED = "unweighted"
SIMPLIFIED_UNWEIGHTED = "simplified-unweighted"
SIMPLIFIED_WEIGHTED = "simplified-weighted"
STRATEGIES = (UNWEIGHTED, SIMPLIFIED_UNWEIGHTED, SIMPLIFIED_WEIGHTED)


@dataclass(frozen=True)
class MotifClass:
    """One isomorphism class; canonical_edges is the lexicographically
    smallest edge tuple over all node permutations."""

    id: int
    node_count: int
    canonical_edges: tuple[tuple[int, int], ...]


def _weakly_connected(n: int, edges) -> bool:
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def _canonical(n: int, edges) -> tuple[tuple[int, int], ...]:
    best = None
    for perm in permutations(range(n)):
        candidate = tuple(sorted((perm[a], perm[b]) for a, b in edges))
        if best is None or candidate < best:
            best = candidate
    return best


def _build_catalog() -> tuple[MotifClass, ...]:
    classes = []
    for n in (2, 3):
        pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
        seen = set()
        for mask in range(1, 1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            if not _weakly_connected(n, edges):
                continue
            canon = _canonical(n, edges)
            if canon not in seen:
                seen.add(canon)
                classes.append((n, len(canon), canon))
    classes.sort()
    return tuple(
        MotifClass(id=i, node_count=n, canonical_edges=canon)
        for i, (n, _, canon) in enumerate(classes)
    )


CATALOG: tuple[MotifClass, ...] = _build_catalog()
_CLASS_BY_CANON = {mc.canonical_edges: mc.id for mc in CATALOG}

# Arc order used by the bitmask tables below.
_PAIR_ARCS = ((0, 1), (1, 0))
_TRIAD_ARCS = ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1))


def _mask_table(n: int, arcs) -> list[int | None]:
    table: list[int | None] = [None] * (1 << len(arcs))
    for mask in range(1, 1 << len(arcs)):
        edges = [arcs[i] for i in range(len(arcs)) if mask >> i & 1]
        if _weakly_connected(n, edges):
            table[mask] = _CLASS_BY_CANON[_canonical(n, edges)]
    return table


_PAIR_CLASS = _mask_table(2, _PAIR_ARCS)
_TRIAD_CLASS = _mask_table(3, _TRIAD_ARCS)


def class_name(mc: MotifClass) -> str:
    """Readable class label from the canonical arcs, e.g. "3n:0>1,2>1"."""
    arcs = ",".join(f"{a}>{b}" for a, b in mc.canonical_edges)
    return f"{mc.node_count}n:{arcs}"


def canonical_class(edges) -> int:
    """Isomorphism class id of a loop-free weakly connected 2-/3-node digraph.

    Node labels are arbitrary hashables; classification is by exhaustive
    permutation canonicalization.
    """
    edges = list(edges)
    nodes = sorted({v for e in edges for v in e})
    if any(a == b for a, b in edges):
        raise NotAMotif("self-loops are not allowed")
    if len(nodes) not in (2, 3):
        raise NotAMotif(f"motifs have 2 or 3 nodes, got {len(nodes)}")
    index = {v: i for i, v in enumerate(nodes)}
    relabeled = [(index[a], index[b]) for a, b in edges]
    if not _weakly_connected(len(nodes), relabeled):
        raise NotAMotif("edge set is not weakly connected")
    return _CLASS_BY_CANON[_canonical(len(nodes), relabeled)]


@dataclass
class FeatureVector:
    """Motif census of one document chain under one strategy/threshold."""

    doc_id: str
    strategy: str
    threshold: float
    values: np.ndarray  # (15,) float64, indexed by MotifClass id


def census(
    chain: MarkovChain, strategy: str, threshold: float = 0.0, doc_id: str = ""
) -> FeatureVector:
    """Count induced 2-/3-node motifs of the chain (self-loops dropped).

    Simplified strategies prune the chain first; the weighted variant credits
    each occurrence with the sum of its arcs' transition probabilities instead
    of 1.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if chain.n_states == 0:
        raise EmptyChain("chain has no states")
    if strategy == UNWEIGHTED:
        threshold = 0.0
    else:
        chain = prune(chain, threshold)
    weighted = strategy == SIMPLIFIED_WEIGHTED

    probs = chain.probs.copy()
    np.fill_diagonal(probs, 0.0)
    present = probs > 0.0
    values = np.zeros(len(CATALOG), dtype=np.float64)
    n = chain.n_states

    for a, b in combinations(range(n), 2):
        mask = 0
        weight = 0.0
        if present[a, b]:
            mask |= 1
            weight += probs[a, b]
        if present[b, a]:
            mask |= 2
            weight += probs[b, a]
        if mask:
            values[_PAIR_CLASS[mask]] += weight if weighted else 1.0

    for a, b, c in combinations(range(n), 3):
        mask = 0
        weight = 0.0
        if present[a, b]:
            mask |= 1
            weight += probs[a, b]
        if present[b, a]:
            mask |= 2
            weight += probs[b, a]
        if present[a, c]:
            mask |= 4
            weight += probs[a, c]
        if present[c, a]:
            mask |= 8
            weight += probs[c, a]
        if present[b, c]:
            mask |= 16
            weight += probs[b, c]
        if present[c, b]:
            mask |= 32
            weight += probs[c, b]
        if mask:
            cls = _TRIAD_CLASS[mask]
            if cls is not None:
                values[cls] += weight if weighted else 1.0

    return FeatureVector(doc_id=doc_id, strategy=strategy, threshold=threshold, values=values)


def write_features(rows, path) -> None:
    """Tabular export: one row per (doc, strategy, threshold), 15 class columns."""
    rows = list(rows)
    if not rows:
        raise ExportError("no feature rows to export")
    header = ["doc_id", "strategy", "threshold"] + [class_name(mc) for mc in CATALOG]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(header) + "\n")
        for fv in rows:
            cells = [fv.doc_id, fv.strategy, f"{fv.threshold:.9g}"]
            cells.extend(f"{v:.9g}" for v in fv.values)
            fh.write("\t".join(cells) + "\n")
