"""Word vector stores and sentence vectors.

A sentence is represented by the mean of the vectors of its in-vocabulary
tokens (repeated tokens contribute once per occurrence). Sentences with no
covered token are dropped, and the survivors re-indexed in text order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .corpus import Sentence
from .errors import DimensionMismatch, ParseError, SemflowError

__all__ = [
    "EmbeddingStore",
    "SyntheticStore",
    "SentenceVector",
    "load_store",
    "synthetic_store",
    "sentence_vector",
    "embed_document",
]


class EmbeddingStore:
    """Mapping from lowercase word to a float64 vector of fixed dimension."""

    def __init__(self, dimension: int, table: dict[str, np.ndarray]):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.table = table

    def get(self, word: str) -> Optional[np.ndarray]:
        return self.table.get(word)

    def __contains__(self, word: str) -> bool:
        return self.get(word) is not None

    def __len__(self) -> int:
        return len(self.table)


class SyntheticStore(EmbeddingStore):
    """Deterministic hash-seeded unit vectors; every word is in-vocabulary.

    Used for tests and the demo so that multi-gigabyte pretrained vector files
    are never a dependency. The vector of a word depends only on
    (word, dimension, seed), not on lookup order.
    """

    def __init__(self, dimension: int, seed: int):
        super().__init__(dimension, {})
        self.seed = int(seed)

    def get(self, word: str) -> np.ndarray:
        vec = self.table.get(word)
        if vec is None:
            digest = hashlib.sha256(f"{self.seed}:{word}".encode("utf-8")).digest()
            rng = np.random.Generator(np.random.PCG64(int.from_bytes(digest[:8], "little")))
            vec = rng.standard_normal(self.dimension)
            vec /= np.linalg.norm(vec)
            self.table[word] = vec
        return vec


def load_store(path, fmt: str = "word2vec-text") -> EmbeddingStore:
    """Load an embedding store.

    ``word2vec-text``: first line "<vocab> <d>", then "<word> <v1> ... <vd>"
    per line; duplicate words keep their first occurrence.
    ``synthetic``: ``path`` is a spec string "d=<dim>,seed=<seed>".
    """
    if fmt == "synthetic":
        params = _parse_synthetic_spec(str(path))
        return SyntheticStore(params["d"], params["seed"])
    if fmt != "word2vec-text":
        raise SemflowError(f"unknown embedding format {fmt!r}")

    table: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise ParseError("expected header '<vocab> <dimension>'", line=1)
        try:
            _, dim = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"bad header: {exc}", line=1) from exc
        if dim < 1:
            raise ParseError("dimension must be positive", line=1)
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            fields = line.split()
            word = fields[0].lower()
            if len(fields) - 1 != dim:
                raise DimensionMismatch(
                    f"line {lineno}: expected {dim} values, got {len(fields) - 1}"
                )
            try:
                vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"bad vector value: {exc}", line=lineno) from exc
            if word not in table:
                table[word] = vec
    if not table:
        raise ParseError("store contains no vectors", line=1)
    return EmbeddingStore(dim, table)


def _parse_synthetic_spec(spec: str) -> dict[str, int]:
    params = {"d": 64, "seed": 0}
    if spec:
        for item in spec.split(","):
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in params:
                raise ParseError(f"unknown synthetic store parameter {key!r}")
            try:
                params[key] = int(value)
            except ValueError as exc:
                raise ParseError(f"bad synthetic store parameter {item!r}") from exc
    return params


def synthetic_store(dimension: int, seed: int) -> SyntheticStore:
    return SyntheticStore(dimension, seed)


@dataclass
class SentenceVector:
    """Average word vector of a sentence; omega counts contributing tokens."""

    doc_id: str
    index: int
    vector: np.ndarray
    omega: int


def sentence_vector(sentence: Sentence, store: EmbeddingStore) -> Optional[SentenceVector]:
    """Average the store vectors of the sentence's tokens.

    Out-of-vocabulary tokens are skipped; returns None (dropped) when no token
    is covered. Repeated tokens contribute per occurrence.
    """
    total = np.zeros(store.dimension, dtype=np.float64)
    omega = 0
    for token in sentence.tokens:
        vec = store.get(token)
        if vec is not None:
            total += vec
            omega += 1
    if omega == 0:
        return None
    return SentenceVector(sentence.doc_id, sentence.index, total / omega, omega)


def embed_document(
    sentences: Sequence[Sentence], store: EmbeddingStore
) -> tuple[list[SentenceVector], list[int]]:
    """Vectorize a document's sentences, dropping uncovered ones.

    Survivors are re-indexed 0..S'-1 preserving text order; the second return
    value lists the original indices of dropped sentences.
    """
    vectors = []
    dropped = []
    for sent in sentences:
        sv = sentence_vector(sent, store)
        if sv is None:
            dropped.append(sent.index)
        else:
            sv.index = len(vectors)
            vectors.append(sv)
    return vectors, dropped
