"""Plain-text ingestion: boilerplate stripping, sentence segmentation, token filtering.

Input books are expected in the Project Gutenberg plain-text layout (license
header, ``*** START ... ***`` / ``*** END ... ***`` markers, license footer),
but any UTF-8 text works: when the markers are missing the text is used as-is
and a warning flag is raised instead.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple, Optional, Sequence

from .errors import InvalidDocument, ParseError

__all__ = [
    "Document",
    "Sentence",
    "StrippedText",
    "strip_boilerplate",
    "segment_sentences",
    "tokenize_filter",
    "load_stopwords",
    "ingest_document",
    "read_manifest",
]


@dataclass
class Document:
    """One book of a corpus, with optional class label and publication year."""

    id: str
    title: str = ""
    author: str = ""
    label: Optional[str] = None
    year: Optional[int] = None
    body: str = ""


@dataclass
class Sentence:
    """A token-filtered sentence; ``index`` is its ordinal among surviving sentences."""

    doc_id: str
    index: int
    start: int
    end: int
    tokens: list[str] = field(default_factory=list)

    def text(self, body: str) -> str:
        return body[self.start:self.end]


class StrippedText(NamedTuple):
    text: str
    markers_found: bool


_START_RE = re.compile(r"\*\*\*\s*START[^\n]*?\*\*\*", re.IGNORECASE)
_END_RE = re.compile(r"\*\*\*\s*END[^\n]*?\*\*\*", re.IGNORECASE)

# Words that end with '.' without closing a sentence. Single letters (initials,
# "e.g.", "i.e.") are guarded separately, except the pronoun "I".
_ABBREVIATIONS = frozenset(
    """
    mr mrs ms dr prof rev fr hon st sr jr messrs mme mlle esq
    gen col capt lieut maj sgt adm gov pres sec
    no nos vol vols chap fig figs art sec pp ed eds
    vs viz cf al seq
    """.split()
)

_TERMINAL_RE = re.compile(r"[.!?]+")
_CLOSERS = "\"')]”’»"
_WORD_BEFORE_RE = re.compile(r"([A-Za-z]+)$")
_TOKEN_RE = re.compile(r"[a-z]+")


def strip_boilerplate(raw: str) -> StrippedText:
    """Extract the body between Gutenberg start/end markers.

    Returns the full text with ``markers_found=False`` when either marker is
    missing, so non-Gutenberg files pass through unchanged.
    """
    if not raw:
        raise InvalidDocument("empty document")
    start = _START_RE.search(raw)
    if start:
        end = _END_RE.search(raw, start.end())
        if end:
            return StrippedText(raw[start.end():end.start()], True)
    return StrippedText(raw, False)


def _guarded_abbreviation(body: str, dot_pos: int) -> bool:
    """True when the '.' at dot_pos follows an abbreviation or an initial."""
    m = _WORD_BEFORE_RE.search(body, 0, dot_pos)
    if m is None or m.end() != dot_pos:
        return False
    word = m.group(1)
    if len(word) == 1:
        return word != "I"
    return word.lower() in _ABBREVIATIONS


def segment_sentences(body: str) -> list[tuple[int, int]]:
    """Split ``body`` into sentence spans on terminal punctuation.

    Periods after known abbreviations and single-letter initials do not end a
    sentence; closing quotes/brackets directly after the terminal run are kept
    inside the span. Trailing text without terminal punctuation becomes a
    final span. Returned (start, end) ranges are increasing and
    non-overlapping.
    """
    if not body:
        raise InvalidDocument("empty document body")
    spans = []
    cursor = 0  # first character not yet assigned to a span

    def emit(end: int) -> None:
        nonlocal cursor
        start = cursor
        while start < end and body[start].isspace():
            start += 1
        stop = end
        while stop > start and body[stop - 1].isspace():
            stop -= 1
        if stop > start:
            spans.append((start, stop))
        cursor = end

    for m in _TERMINAL_RE.finditer(body):
        if m.start() < cursor:
            continue
        if body[m.start()] == "." and len(m.group()) == 1 and _guarded_abbreviation(body, m.start()):
            continue
        end = m.end()
        while end < len(body) and body[end] in _CLOSERS:
            end += 1
        emit(end)
    if body[cursor:].strip():
        emit(len(body))
    return spans


def tokenize_filter(text: str, stopwords: frozenset[str]) -> list[str]:
    """Lowercase, split on non-alphabetic characters, drop stopwords.

    Tokens are strictly ASCII-alphabetic runs; digits, punctuation and
    accented characters act as separators.
    """
    return [t for t in _TOKEN_RE.findall(text.lower()) if t not in stopwords]


def load_stopwords(path=None) -> frozenset[str]:
    """Load the stopword list, one lowercase word per line ('#' comments allowed).

    Without a path the bundled English list is used.
    """
    if path is None:
        text = resources.files("semflow.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def ingest_document(doc: Document, stopwords: frozenset[str]) -> list[Sentence]:
    """Segment and tokenize a document body into ordered sentences.

    Sentences whose token list is empty after filtering are dropped here;
    surviving sentences are indexed 0..S-1 in text order.
    """
    sentences = []
    for start, end in segment_sentences(doc.body):
        tokens = tokenize_filter(doc.body[start:end], stopwords)
        if tokens:
            sentences.append(Sentence(doc.id, len(sentences), start, end, tokens))
    return sentences


_MANIFEST_FIELDS = ("id", "path", "title", "author", "label", "year")


def read_manifest(path) -> list[dict]:
    """Read a JSON-lines corpus manifest.

    Each line is an object with fields id, path, title, author, label, year
    (label and year may be null). Duplicate ids are rejected.
    """
    entries = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}", line=lineno) from exc
            if not isinstance(record, dict) or "id" not in record or "path" not in record:
                raise ParseError("manifest record needs at least 'id' and 'path'", line=lineno)
            if record["id"] in seen:
                raise ParseError(f"duplicate document id {record['id']!r}", line=lineno)
            seen.add(record["id"])
            entries.append({key: record.get(key) for key in _MANIFEST_FIELDS})
    return entries
