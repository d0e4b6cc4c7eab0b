"""Community-transition Markov chains.

The document's sentence order turns the community labels into a discrete
sequence; adjacent pairs are counted into a first-order transition matrix
whose rows are normalized to probabilities. Pruning removes weak transitions
(strictly below the threshold) without renormalizing the survivors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .community import Partition
from .errors import EmptyChain, InvalidThreshold, ParseError, PartitionMismatch

__all__ = [
    "CommunitySequence",
    "MarkovChain",
    "community_sequence",
    "build_markov",
    "prune",
    "write_chain",
    "read_chain",
]


@dataclass
class CommunitySequence:
    """Community label of each surviving sentence, in text order."""

    doc_id: str
    labels: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass
class MarkovChain:
    """Transition counts N and row-normalized probabilities P over C states."""

    counts: np.ndarray  # (C, C) int64, N[a][b] = transitions a -> b
    probs: np.ndarray  # (C, C) float64; all-zero rows for states without outgoing

    @property
    def n_states(self) -> int:
        return self.counts.shape[0]


def community_sequence(
    doc_id: str, partition: Partition, n_sentences: int | None = None
) -> CommunitySequence:
    """Read the sentence-order label sequence off the partition.

    Sentence node i of the similarity graph is the i-th surviving sentence,
    so the sequence is the assignment itself, in node order.
    """
    labels = partition.assignment
    if n_sentences is not None and n_sentences != labels.shape[0]:
        raise PartitionMismatch(
            f"partition covers {labels.shape[0]} nodes, document has {n_sentences} sentences"
        )
    return CommunitySequence(doc_id=doc_id, labels=labels.tolist())


def build_markov(seq: CommunitySequence, n_states: int | None = None) -> MarkovChain:
    """Count adjacent-pair transitions (self-transitions included) and normalize rows."""
    labels = seq.labels
    if len(labels) < 2:
        raise EmptyChain(f"need at least 2 labels, got {len(labels)}")
    if n_states is None:
        n_states = max(labels) + 1
    counts = np.zeros((n_states, n_states), dtype=np.int64)
    for a, b in zip(labels[:-1], labels[1:]):
        counts[a, b] += 1
    probs = counts.astype(np.float64)
    row_sums = probs.sum(axis=1, keepdims=True)
    np.divide(probs, row_sums, out=probs, where=row_sums > 0)
    return MarkovChain(counts=counts, probs=probs)


def prune(chain: MarkovChain, threshold: float) -> MarkovChain:
    """Zero out transitions with probability strictly below the threshold.

    Survivors keep their probabilities unchanged (no renormalization), so
    prune(chain, 0) is the identity and entries equal to the threshold stay.
    """
    if not 0.0 <= threshold <= 1.0:
        raise InvalidThreshold(f"threshold {threshold} outside [0, 1]")
    keep = chain.probs >= threshold
    return MarkovChain(counts=chain.counts * keep, probs=chain.probs * keep)


def write_chain(chain: MarkovChain, path) -> None:
    """Export: header "C num_transitions", then "a b count prob" per nonzero entry."""
    rows, cols = np.nonzero(chain.counts)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{chain.n_states} {int(chain.counts.sum())}\n")
        for a, b in zip(rows.tolist(), cols.tolist()):
            fh.write(f"{a} {b} {int(chain.counts[a, b])} {chain.probs[a, b]:.9g}\n")


def read_chain(path) -> MarkovChain:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError("expected header 'C num_transitions'", line=1)
        n_states = int(header[0])
        counts = np.zeros((n_states, n_states), dtype=np.int64)
        probs = np.zeros((n_states, n_states), dtype=np.float64)
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ParseError("expected 'a b count prob'", line=lineno)
            a, b = int(parts[0]), int(parts[1])
            counts[a, b] = int(parts[2])
            probs[a, b] = float(parts[3])
    return MarkovChain(counts=counts, probs=probs)
