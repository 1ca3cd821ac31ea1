"""Overlay a term's relative frequency with its context volatility.

The point of the exercise: a term can keep a flat usage frequency while
its context churns, so the two signals measure different things. The two
series are min-max aligned for the overlay, exactly like a two-line chart
would draw them.

Run with:  python demos/04_frequency_vs_volatility.py
"""

import numpy as np

from contextvol import (
    VolatilityConfig,
    build_corpus_matrices,
    build_vocabulary,
    min_max_align,
    relative_frequency_series,
    series_correlation,
    tf_idf,
    volatility_series,
)
from contextvol.preprocess import PruningConfig

import sys, os
sys.path.insert(0, os.path.dirname(__file__))
from _demo_corpus import context_shift_corpus

corpus = context_shift_corpus(months=18, shift_at=9)
vocab = build_vocabulary(
    corpus, PruningConfig(min_doc_freq=1, relative_low=0.0, relative_high=1.0)
)
matrices = build_corpus_matrices(corpus, vocab)

history = 4
config = VolatilityConfig(history=history)
volatility = volatility_series(matrices, vocab.id("kredit"), config)
frequency = relative_frequency_series(corpus, "kredit")

# restrict frequency to the window ends so both series share an index
freq_window = frequency.values[history - 1 :]
vol_scaled, freq_scaled = min_max_align(volatility.values, freq_window)

print("slice  volatility  frequency   (both scaled to [0,1])")
for i, end in enumerate(volatility.end_indices):
    vbar = "v" * int(round(10 * vol_scaled[i]))
    fbar = "f" * int(round(10 * freq_scaled[i]))
    print(f"  {end:2d}   {vol_scaled[i]:9.3f}  {freq_scaled[i]:9.3f}   |{vbar:<10s}|{fbar:<10s}|")

r = series_correlation(volatility.values, freq_window)
print(f"\nPearson r between the raw series: {r:+.3f}")
print("frequency stays flat while volatility spikes at the context shift")

# --- tf-idf as the per-document comparison measure -----------------------------

doc = corpus.documents[0]
print(f"\ntf-idf of a few terms in document {doc.id}:")
for term in ("kredit", "zins", "haus"):
    if term in vocab:
        print(f"  {term:8s} {tf_idf(corpus, term, doc.id):.4f}")
