"""Context volatility: rank matrices and the windowed series.

A term whose significant co-occurrents keep their order contributes zero
volatility; when the context set is replaced, the ranks of old and new
co-occurrents disperse and the windowed score spikes.

Run with:  python demos/03_volatility_series.py
"""

import numpy as np

from contextvol import (
    VolatilityConfig,
    build_corpus_matrices,
    build_rank_matrix,
    build_vocabulary,
    interquartile_range,
    slice_ranks,
    top_volatile_terms,
    volatility_series,
)
from contextvol.preprocess import PruningConfig

import sys, os
sys.path.insert(0, os.path.dirname(__file__))
from _demo_corpus import context_shift_corpus

# --- a corpus whose target term changes context halfway -----------------------

corpus = context_shift_corpus(months=12, shift_at=6)
vocab = build_vocabulary(
    corpus, PruningConfig(min_doc_freq=1, relative_low=0.0, relative_high=1.0)
)
matrices = build_corpus_matrices(corpus, vocab)
target = vocab.id("kredit")

# --- fractional ranks per slice ------------------------------------------------
# Rank 1 = strongest co-occurrent; tied weights share the average position.

print("ranks of kredit's co-occurrents, first and last slice:")
for t in (0, corpus.slice_count - 1):
    ranks = slice_ranks(matrices[t], target)
    pretty = {vocab.term(c): r for c, r in sorted(ranks.items(), key=lambda kv: kv[1])}
    print(f"  slice {t:2d}: {pretty}")

# --- the rank matrix over a window ----------------------------------------------
# Rows = union of co-occurrents seen in the window; a co-occurrent missing
# from a slice is ranked one worse than everything present there.

window = matrices[4:8]  # spans the context shift
rank_matrix = build_rank_matrix(window, target, absent_policy="max_rank")
print(f"\nrank matrix over slices 4..7 ({len(rank_matrix.cooc_ids)} co-occurrents):")
for i, cooc in enumerate(rank_matrix.cooc_ids):
    row = " ".join(f"{r:4.1f}" for r in rank_matrix.ranks[i])
    spread = interquartile_range(rank_matrix.ranks[i])
    print(f"  {vocab.term(int(cooc)):10s} {row}   iqr={spread:.2f}")

# --- the windowed volatility series ----------------------------------------------

config = VolatilityConfig(history=4, dispersion="iqr", absent_policy="max_rank")
series = volatility_series(matrices, target, config)
print(f"\nvolatility of 'kredit', history=4 (one value per window end):")
for end, value in zip(series.end_indices, series.values):
    bar = "#" * int(round(8 * value))
    print(f"  slice {end:2d}: {value:6.3f} {bar}")
peak = list(series.end_indices)[int(np.argmax(series.values))]
print(f"peak at slice {peak} -- the windows that straddle the context shift")

# --- corpus-wide ranking by the global constant ----------------------------------
# history = slice count collapses the series to a single number per term.

print("\ntop terms by global volatility:")
for term, value in top_volatile_terms(matrices, vocab, k=5):
    print(f"  {term:10s} {value:.3f}")
