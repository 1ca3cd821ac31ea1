"""Shared synthetic corpus builder for the demo scripts."""

import datetime as dt
import random

from contextvol import Document, assign_time_slices, tokenize_corpus


def context_shift_corpus(months=12, shift_at=6, seed=99):
    """Monthly corpus where 'kredit' swaps its context terms at `shift_at`.

    The target keeps a constant number of occurrences per month; filler
    documents vary the slice token totals so frequency-based series are
    not degenerate.
    """
    rng = random.Random(seed)
    context_a = ["zins", "bank", "sparen", "geld"]
    context_b = ["schuld", "risiko", "krise", "verlust"]
    filler = ["haus", "auto", "baum", "fluss", "berg", "stadt"]

    docs = []
    for m in range(months):
        active = context_a if m < shift_at else context_b
        sentences = []
        for s in range(8):
            pair = [active[s % 4], active[(s + 1) % 4]]
            sentences.append(" ".join(["kredit"] + pair) + ".")
        sentences.append(" ".join(["kredit"] + rng.sample(active, 2)) + ".")
        # stable filler contexts (identical every month) plus a jitter
        # sentence that varies the slice token totals
        for s in range(3):
            sentences.append(" ".join(filler[s : s + 3]) + ".")
        sentences.append(" ".join(rng.sample(filler, rng.randint(2, 4))) + ".")
        for d in range(3):
            chunk = sentences[d::3]
            docs.append(
                Document(
                    id=f"m{m:02d}d{d}",
                    timestamp=dt.date(2008 + m // 12, 1 + m % 12, 3 + 2 * d),
                    text=" ".join(chunk),
                )
            )
    corpus = assign_time_slices(docs, "month")
    tokenize_corpus(corpus)
    return corpus
