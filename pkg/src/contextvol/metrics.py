"""Comparison measures: frequency series, tf-idf, topic salience, overlays."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass

import numpy as np

from .corpus import DocTopicTable, SlicedCorpus

log = logging.getLogger(__name__)


@dataclass
class FrequencySeries:
    """Per-slice relative token frequency of one word (length T)."""

    word: str
    values: np.ndarray


@dataclass
class TopicSalienceSeries:
    """Per-slice count of documents whose topic share meets a threshold."""

    topic: str
    values: np.ndarray
    normalized: bool = False


def relative_frequency_series(corpus: SlicedCorpus, word: str) -> FrequencySeries:
    """Occurrences of `word` per slice divided by the slice's token total.

    Token-level: both numerator and denominator count raw tokens of the
    tokenized sentences. Empty slices yield 0.
    """
    values = np.zeros(corpus.slice_count)
    for t, sl in enumerate(corpus.slices):
        occurrences = 0
        total = 0
        for doc_id in sl.doc_ids:
            for sentence in corpus.document(doc_id).sentences:
                total += len(sentence)
                occurrences += sum(1 for tok in sentence if tok == word)
        if total:
            values[t] = occurrences / total
    return FrequencySeries(word=word, values=values)


def tf_idf(corpus: SlicedCorpus, term: str, doc_id: str, sublinear_tf: bool = False) -> float:
    """tf(term, doc) * ln(D / df(term)) over the tokenized corpus.

    tf is the raw in-document count (or 1 + ln(count) with sublinear_tf).
    Returns 0 when the term is absent from the document or occurs in every
    document (idf = 0). Scans the corpus for df; cache externally if called
    in bulk.
    """
    doc = corpus.document(doc_id)
    count = sum(sentence.count(term) for sentence in doc.sentences)
    if count == 0:
        return 0.0
    df = sum(
        1 for d in corpus.documents if any(term in sentence for sentence in d.sentences)
    )
    n_docs = len(corpus.documents)
    if df == n_docs:
        return 0.0
    tf = 1.0 + math.log(count) if sublinear_tf else float(count)
    return tf * math.log(n_docs / df)


def topic_salience_series(
    corpus: SlicedCorpus,
    table: DocTopicTable,
    topic: str,
    threshold: float,
    normalize: bool = False,
    denominator: str = "slice_docs",
) -> TopicSalienceSeries:
    """Documents per slice whose share for `topic` is >= threshold.

    With normalize on, counts are divided by the slice's document count
    (0 for empty slices) or, with denominator="global_max", by the largest
    per-slice count.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    if topic not in table.topics():
        raise ValueError(f"unknown topic {topic!r}; known topics: {sorted(table.topics())}")
    if denominator not in ("slice_docs", "global_max"):
        raise ValueError(f"denominator must be 'slice_docs' or 'global_max', got {denominator!r}")

    counts = np.zeros(corpus.slice_count)
    for t, sl in enumerate(corpus.slices):
        counts[t] = sum(1 for doc_id in sl.doc_ids if table.share(doc_id, topic) >= threshold)
    if not normalize:
        return TopicSalienceSeries(topic=topic, values=counts)

    if denominator == "slice_docs":
        values = np.zeros(corpus.slice_count)
        for t, sl in enumerate(corpus.slices):
            if sl.doc_ids:
                values[t] = counts[t] / len(sl.doc_ids)
    else:
        peak = counts.max()
        values = counts / peak if peak > 0 else counts
    return TopicSalienceSeries(topic=topic, values=values, normalized=True)


def min_max_align(series_a, series_b) -> tuple[np.ndarray, np.ndarray]:
    """Scale two equal-length series independently to [0, 1] for overlaying.

    Each series is mapped by (x - min) / (max - min), which leaves argmax
    and argmin positions unchanged. A constant series maps to all zeros
    with a warning.
    """
    a = np.asarray(series_a, dtype=float)
    b = np.asarray(series_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"series lengths differ: {a.shape} vs {b.shape}")

    def scale(x: np.ndarray) -> np.ndarray:
        span = x.max() - x.min()
        if span == 0:
            log.warning("constant series mapped to all zeros in min-max alignment")
            return np.zeros_like(x)
        return (x - x.min()) / span

    return scale(a), scale(b)


def series_correlation(series_a, series_b) -> float:
    """Pearson correlation of two equal-length series (length >= 3).

    Undefined for constant input; reported as NaN with a warning rather
    than raised, so exploratory report code can keep going.
    """
    a = np.asarray(series_a, dtype=float)
    b = np.asarray(series_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"series lengths differ: {a.shape} vs {b.shape}")
    if a.size < 3:
        raise ValueError(f"need at least 3 points, got {a.size}")
    da = a - a.mean()
    db = b - b.mean()
    denom = math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db)))
    if denom == 0:
        log.warning("correlation undefined for constant series; returning NaN")
        return float("nan")
    return float(np.dot(da, db)) / denom


def export_series_csv(path: str, name: str, dates, values) -> None:
    """Write a series as CSV with header series_name,slice_start_date,value."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["series_name", "slice_start_date", "value"])
        for date, value in zip(dates, values):
            writer.writerow([name, date.isoformat(), repr(float(value))])
