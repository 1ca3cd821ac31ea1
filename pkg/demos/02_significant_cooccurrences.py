"""Per-slice significant co-occurrences and the context-graph edge list.

Run with:  python demos/02_significant_cooccurrences.py
"""

import math
import tempfile

from contextvol import (
    ContingencyCounts,
    PruningConfig,
    assign_time_slices,
    build_slice_matrix,
    build_vocabulary,
    count_slice_cooccurrences,
    dice_score,
    export_context_graph,
    llr_score,
    mi_score,
    tokenize_corpus,
)
from contextvol.corpus import Document
import datetime as dt

# --- significance measures on a 2x2 contingency table ------------------------
# k11 = units containing both terms, k12/k21 = one without the other,
# k22 = neither; a unit is a sentence (default) or a token window.

table = ContingencyCounts(k11=20, k12=80, k21=80, k22=820)
print("contingency (20, 80, 80, 820):")
print(f"  log-likelihood = {llr_score(table):.4f}")
print(f"  dice           = {dice_score(table):.4f}")
print(f"  mutual info    = {mi_score(table):.4f}")

# perfect independence scores exactly zero
print(f"\nindependent table -> llr = {llr_score(ContingencyCounts(10, 10, 10, 10))}")
# perfect diagonal association: 40 * ln 2
print(f"diagonal table    -> llr = {llr_score(ContingencyCounts(10, 0, 0, 10)):.6f}"
      f"  (40*ln2 = {40 * math.log(2):.6f})")

# --- build one slice matrix ---------------------------------------------------

texts = [
    "Die Bank vergibt Kredit. Der Kredit kostet Zins.",
    "Hohe Zinsen belasten den Kredit. Die Bank warnt.",
    "Faule Kredite. Die Bank haftet. Der Zins steigt.",
    "Das Wetter ist gut. Der Garten wächst.",
]
documents = [
    Document(f"d{i}", dt.date(2009, 1, 2 + i), text) for i, text in enumerate(texts)
]
corpus = assign_time_slices(documents, "month")
tokenize_corpus(corpus, lemma_map={"kredite": "kredit", "zinsen": "zins", "banken": "bank"})
vocab = build_vocabulary(
    corpus,
    PruningConfig(
        min_doc_freq=2,
        relative_low=0.0,
        relative_high=1.0,
        stopwords=frozenset({"der", "die", "das", "den", "ist"}),
    ),
)
print(f"\nvocabulary after pruning: {vocab.terms}")

counts = count_slice_cooccurrences(corpus.docs_in_slice(0), vocab, window="sentence")
matrix = build_slice_matrix(counts, measure="llr", top_k=200, min_joint=1)
print(f"slice 0 has {counts.n_units} sentence units and {len(matrix)} significant pairs:")
for (a, b), weight in sorted(matrix.pairs.items(), key=lambda kv: -kv[1]):
    print(f"  {vocab.term(a):8s} -- {vocab.term(b):8s}  {weight:.3f}")

# --- export the context graph for one word ------------------------------------
# The edge list (source,target,weight) is the data behind a context-network
# drawing: the word and its significant co-occurrents as nodes.

out = tempfile.NamedTemporaryFile("r", suffix=".csv", delete=False)
edges = export_context_graph(matrix, "kredit", vocab, out.name)
print(f"\ncontext graph of 'kredit' ({edges} edges):")
print(open(out.name).read())
