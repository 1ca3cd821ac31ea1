"""Shared corpus builders for the test suite."""

from __future__ import annotations

import datetime as dt
import random

import pytest

from contextvol import (
    Document,
    PruningConfig,
    SlicedCorpus,
    assign_time_slices,
    build_corpus_matrices,
    build_vocabulary,
    tokenize_corpus,
)
from contextvol.cooccurrence import CoocConfig

NO_PRUNING = PruningConfig(min_doc_freq=1, relative_low=0.0, relative_high=1.0)


def month_date(offset: int, day: int = 15, origin=(2020, 1)) -> dt.date:
    year, month = origin
    m = month - 1 + offset
    return dt.date(year + m // 12, m % 12 + 1, day)


def corpus_from_slices(slice_sentences: list[list[list[str]]]) -> SlicedCorpus:
    """One document per (slice, sentence list); monthly slices from 2020-01.

    `slice_sentences[t]` is a list of documents, each a list of sentences,
    each a list of tokens. Tokens must survive the tokenizer (lowercase
    letter/digit runs).
    """
    documents = []
    for t, docs in enumerate(slice_sentences):
        for d, sentences in enumerate(docs):
            text = " ".join(" ".join(s) + "." for s in sentences)
            documents.append(Document(id=f"d{t}_{d}", timestamp=month_date(t), text=text))
    corpus = assign_time_slices(documents, "month")
    tokenize_corpus(corpus)
    return corpus


def random_corpus(
    rng: random.Random,
    n_slices: int,
    vocab_size: int,
    docs_per_slice: int = 4,
    sentences_per_doc: int = 5,
    tokens_per_sentence: int = 6,
) -> SlicedCorpus:
    terms = [f"w{i:03d}" for i in range(vocab_size)]
    slices = []
    for _ in range(n_slices):
        docs = []
        for _ in range(docs_per_slice):
            docs.append(
                [
                    [rng.choice(terms) for _ in range(tokens_per_sentence)]
                    for _ in range(sentences_per_doc)
                ]
            )
        slices.append(docs)
    return corpus_from_slices(slices)


def matrices_for(corpus, vocab, **options):
    return build_corpus_matrices(corpus, vocab, CoocConfig(**options))


@pytest.fixture
def small_corpus() -> SlicedCorpus:
    return corpus_from_slices(
        [
            [[["bank", "kredit", "zins"], ["bank", "geld"]]],
            [[["bank", "kredit"], ["zins", "geld", "bank"]]],
            [[["bank", "schuld", "zins"], ["schuld", "kredit"]]],
        ]
    )


@pytest.fixture
def small_vocab(small_corpus):
    return build_vocabulary(small_corpus, NO_PRUNING)
