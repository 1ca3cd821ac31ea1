"""Tokenization and vocabulary construction with absolute/relative pruning."""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import SlicedCorpus

log = logging.getLogger(__name__)

# Sentences end at terminal punctuation followed by whitespace; tokens are
# maximal unicode letter/digit runs (underscore excluded).
_SENT_SPLIT = re.compile(r"(?<=[.!?])\s+")
_TOKEN = re.compile(r"[^\W_]+")


def segment_and_tokenize(
    text: str,
    lowercase: bool = True,
    lemma_map: dict[str, str] | None = None,
    blocklist: set[str] | None = None,
) -> list[list[str]]:
    """Split raw text into sentences of normalized tokens.

    Deterministic and pure: the same text always yields the same output.
    Lowercasing is applied before lemma lookup; blocklisted terms (a stand-in
    for entity deletion) are removed after lemma mapping. Sentences that end
    up with zero tokens are dropped so they never count as co-occurrence
    units. Empty text yields zero sentences.
    """
    sentences = []
    for chunk in _SENT_SPLIT.split(text):
        tokens = _TOKEN.findall(chunk)
        if lowercase:
            tokens = [t.lower() for t in tokens]
        if lemma_map:
            tokens = [lemma_map.get(t, t) for t in tokens]
        if blocklist:
            tokens = [t for t in tokens if t not in blocklist]
        if tokens:
            sentences.append(tokens)
    return sentences


def tokenize_corpus(
    corpus: SlicedCorpus,
    lowercase: bool = True,
    lemma_map: dict[str, str] | None = None,
    blocklist: set[str] | None = None,
) -> None:
    """Fill `sentences` on every document in place."""
    for doc in corpus.documents:
        doc.sentences = segment_and_tokenize(doc.text, lowercase, lemma_map, blocklist)


def load_term_file(path: str) -> set[str]:
    """One term per line, UTF-8; blank lines ignored."""
    with open(path, encoding="utf-8") as f:
        return {line.strip() for line in f if line.strip()}


def load_lemma_map(path: str) -> dict[str, str]:
    """One tab-separated (term, lemma) pair per line, UTF-8."""
    mapping = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path} line {lineno}: expected 'term<TAB>lemma'")
            mapping[parts[0].strip()] = parts[1].strip()
    return mapping


@dataclass
class PruningConfig:
    """Vocabulary pruning thresholds.

    min_doc_freq applies the absolute rule (document frequency below the
    threshold is excluded); relative_low/relative_high apply the relative
    rule (terms in less than relative_low or more than relative_high of the
    documents are excluded, strict inequalities). Both rules are conjunctive
    by default; neutral values (min_doc_freq=1, 0.0/1.0) disable one side.
    """

    min_doc_freq: int = 3
    relative_low: float = 0.01
    relative_high: float = 0.99
    stopwords: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.min_doc_freq < 1:
            raise ValueError(f"min_doc_freq must be >= 1, got {self.min_doc_freq}")
        if not 0.0 <= self.relative_low < self.relative_high <= 1.0:
            raise ValueError(
                f"need 0 <= relative_low < relative_high <= 1, "
                f"got ({self.relative_low}, {self.relative_high})"
            )
        if not isinstance(self.stopwords, frozenset):
            self.stopwords = frozenset(self.stopwords)


@dataclass
class Vocabulary:
    """Term/id bijection with document frequencies and per-slice counts.

    Ids are dense in [0, size) and assigned by descending corpus frequency,
    ties broken lexicographically, so every downstream matrix is reproducible
    regardless of document order.
    """

    terms: list[str]
    doc_freq: np.ndarray  # (V,) int64
    term_counts: np.ndarray  # (V,) int64, corpus-wide occurrence counts
    slice_counts: np.ndarray  # (V, T) int64
    document_count: int
    _ids: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._ids:
            self._ids = {t: i for i, t in enumerate(self.terms)}

    @property
    def size(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self._ids

    def id(self, term: str) -> int:
        return self._ids[term]

    def term(self, term_id: int) -> str:
        return self.terms[term_id]


def build_vocabulary(corpus: SlicedCorpus, config: PruningConfig | None = None) -> Vocabulary:
    """Count, prune, and id-assign the corpus vocabulary.

    Excludes stopwords, then terms failing the absolute document-frequency
    rule, then terms failing the relative rule. Raises if nothing survives,
    reporting how many terms each rule removed.
    """
    if config is None:
        config = PruningConfig()
    if corpus.documents and not any(d.sentences for d in corpus.documents):
        raise ValueError("corpus is not tokenized; run tokenize_corpus first")

    doc_freq: Counter[str] = Counter()
    totals: Counter[str] = Counter()
    for doc in corpus.documents:
        per_doc: Counter[str] = Counter()
        for sentence in doc.sentences:
            per_doc.update(sentence)
        totals.update(per_doc)
        doc_freq.update(per_doc.keys())

    n_docs = len(corpus.documents)
    n_stop = n_abs = n_rel = 0
    survivors = []
    for term, df in doc_freq.items():
        if term in config.stopwords:
            n_stop += 1
        elif df < config.min_doc_freq:
            n_abs += 1
        elif (p := df / n_docs) < config.relative_low or p > config.relative_high:
            n_rel += 1
        else:
            survivors.append(term)
    if not survivors:
        raise ValueError(
            "vocabulary empty after pruning "
            f"(stopwords removed {n_stop}, doc_freq < {config.min_doc_freq} removed {n_abs}, "
            f"relative bounds removed {n_rel})"
        )

    survivors.sort(key=lambda t: (-totals[t], t))
    ids = {t: i for i, t in enumerate(survivors)}

    slice_counts = np.zeros((len(survivors), corpus.slice_count), dtype=np.int64)
    for t, sl in enumerate(corpus.slices):
        for doc_id in sl.doc_ids:
            for sentence in corpus.document(doc_id).sentences:
                for token in sentence:
                    i = ids.get(token)
                    if i is not None:
                        slice_counts[i, t] += 1

    return Vocabulary(
        terms=survivors,
        doc_freq=np.array([doc_freq[t] for t in survivors], dtype=np.int64),
        term_counts=np.array([totals[t] for t in survivors], dtype=np.int64),
        slice_counts=slice_counts,
        document_count=n_docs,
        _ids=ids,
    )
