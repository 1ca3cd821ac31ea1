"""Per-slice sparse symmetric term-term matrices of significant co-occurrences.

A context unit is a sentence (default) or a token window. Each unit
contributes at most 1 to any pair's joint count, so the per-pair 2x2
contingency table over units is well defined. Pair weights come from a
pluggable significance measure; each slice matrix keeps only the top_k
strongest co-occurrents per term (union over both rows of a pair).

Slices are independent of each other, which is the parallelization
contract: per-slice builds run in worker processes with no shared mutable
state, and worker count never changes the result.
"""

from __future__ import annotations

import csv
import logging
import math
import multiprocessing
import os
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .corpus import Document, SlicedCorpus
from .preprocess import Vocabulary

log = logging.getLogger(__name__)

WINDOWS = ("sentence", "token")
MEASURES = ("llr", "dice", "mi", "poisson")


@dataclass(frozen=True)
class ContingencyCounts:
    """2x2 unit counts for a term pair: both, a only, b only, neither."""

    k11: int
    k12: int
    k21: int
    k22: int

    @property
    def n(self) -> int:
        return self.k11 + self.k12 + self.k21 + self.k22


def llr_score(c: ContingencyCounts) -> float:
    """Two-way log-likelihood ratio (G^2) of a contingency table.

    2 * sum over cells of k * ln(k * N / (rowsum * colsum)), with the
    convention 0 * ln(0) = 0. Non-negative up to rounding; exactly 0 when
    the observed counts equal the independence expectation.
    """
    n = c.n
    if n == 0:
        raise ValueError("empty contingency table (N=0) must not reach scoring")
    rows = (c.k11 + c.k12, c.k21 + c.k22)
    cols = (c.k11 + c.k21, c.k12 + c.k22)
    total = 0.0
    for k, r, col in (
        (c.k11, rows[0], cols[0]),
        (c.k12, rows[0], cols[1]),
        (c.k21, rows[1], cols[0]),
        (c.k22, rows[1], cols[1]),
    ):
        if k > 0:
            total += k * math.log(k * n / (r * col))
    return 2.0 * total


def dice_score(c: ContingencyCounts) -> float:
    """Dice coefficient 2*k11 / ((k11+k12) + (k11+k21)), in [0, 1]."""
    denom = (c.k11 + c.k12) + (c.k11 + c.k21)
    if denom == 0:
        return 0.0
    return 2.0 * c.k11 / denom


def mi_score(c: ContingencyCounts) -> float:
    """Pointwise mutual information ln(k11*N / ((k11+k12)*(k11+k21))).

    Negative values mean the pair is rarer than chance; callers treat
    those as not significant. k11 = 0 yields -inf (pair dropped).
    """
    if c.k11 <= 0:
        return float("-inf")
    return math.log(c.k11 * c.n / ((c.k11 + c.k12) * (c.k11 + c.k21)))


def poisson_score(c: ContingencyCounts) -> float:
    """Poisson-approximation significance (k11*(ln k11 - ln lam - 1)) / ln N,
    with lam = (k11+k12)*(k11+k21)/N. Negative means not significant."""
    if c.k11 <= 0:
        return float("-inf")
    n = c.n
    if n < 2:
        return float("-inf")  # ln N = 0 for a single-unit slice
    lam = (c.k11 + c.k12) * (c.k11 + c.k21) / n
    return (c.k11 * (math.log(c.k11) - math.log(lam) - 1.0)) / math.log(n)


SCORE_FUNCTIONS = {
    "llr": llr_score,
    "dice": dice_score,
    "mi": mi_score,
    "poisson": poisson_score,
}


@dataclass
class SliceCounts:
    """Raw per-slice counts: pair joint counts, per-term unit counts, N units."""

    slice_index: int
    pair_counts: dict[tuple[int, int], int]  # keys canonical (a < b)
    term_units: dict[int, int]
    n_units: int


def _iter_units(documents: list[Document], window: str, token_window: int):
    """Yield one token list per context unit."""
    if window == "sentence":
        for doc in documents:
            yield from doc.sentences
    elif window == "token":
        k = token_window
        for doc in documents:
            for sentence in doc.sentences:
                for i in range(len(sentence)):
                    yield sentence[max(0, i - k) : i + k + 1]
    else:
        raise ValueError(f"window must be one of {WINDOWS}, got {window!r}")


def count_slice_cooccurrences(
    documents: list[Document],
    vocabulary: Vocabulary,
    window: str = "sentence",
    token_window: int = 5,
    slice_index: int = 0,
) -> SliceCounts:
    """Count binary-per-unit joint occurrences of vocabulary terms.

    Every unit counts at most once per pair and per term, no matter how
    often a term repeats inside it. N counts all units in the slice,
    including units with no vocabulary term (they feed the k22 cell).
    """
    ids = vocabulary._ids
    pair_counts: dict[tuple[int, int], int] = {}
    term_units: dict[int, int] = {}
    n_units = 0
    for unit in _iter_units(documents, window, token_window):
        n_units += 1
        present = {ids[t] for t in unit if t in ids}
        if not present:
            continue
        members = sorted(present)
        for i in members:
            term_units[i] = term_units.get(i, 0) + 1
        for pair in combinations(members, 2):
            pair_counts[pair] = pair_counts.get(pair, 0) + 1
    return SliceCounts(slice_index, pair_counts, term_units, n_units)


@dataclass
class SliceCoocMatrix:
    """Sparse symmetric significance weights for one time slice.

    `pairs` maps canonical (a, b) with a < b to a weight > 0; the diagonal
    is never stored. `weight` and `row` give the symmetric view.
    """

    slice_index: int
    pairs: dict[tuple[int, int], float]
    measure: str = "llr"
    top_k: int = 200
    _rows: dict[int, dict[int, float]] | None = field(default=None, repr=False)

    def weight(self, a: int, b: int) -> float:
        if a > b:
            a, b = b, a
        return self.pairs.get((a, b), 0.0)

    def row(self, term_id: int) -> dict[int, float]:
        """All co-occurrents of term_id with their weights."""
        if self._rows is None:
            rows: dict[int, dict[int, float]] = {}
            for (a, b), w in self.pairs.items():
                rows.setdefault(a, {})[b] = w
                rows.setdefault(b, {})[a] = w
            self._rows = rows
        return self._rows.get(term_id, {})

    def __len__(self) -> int:
        return len(self.pairs)


def _vector_scores(measure, k11, na, nb, n):
    """Vectorized significance scores for arrays of pair counts.

    Mirrors the scalar SCORE_FUNCTIONS cell by cell; unit-tested against
    them. All inputs are float64 arrays except the scalar N.
    """
    if measure == "llr":
        o = (k11, na - k11, nb - k11, n - na - nb + k11)
        r = (na, na, n - na, n - na)
        c = (nb, n - nb, nb, n - nb)
        total = np.zeros_like(k11)
        for ok, rk, ck in zip(o, r, c):
            with np.errstate(divide="ignore", invalid="ignore"):
                term = ok * np.log(ok * n / (rk * ck))
            total += np.where(ok > 0, term, 0.0)
        return 2.0 * total
    if measure == "dice":
        return 2.0 * k11 / (na + nb)
    if measure == "mi":
        with np.errstate(divide="ignore"):
            return np.log(k11 * n / (na * nb))
    if measure == "poisson":
        if n < 2:
            return np.full_like(k11, -np.inf)
        lam = na * nb / n
        with np.errstate(divide="ignore"):
            return (k11 * (np.log(k11) - np.log(lam) - 1.0)) / math.log(n)
    raise ValueError(f"measure must be one of {MEASURES}, got {measure!r}")


def _topk_union_mask(a, b, w, top_k):
    """Boolean mask of pairs surviving per-row top_k selection.

    A pair survives if it is among the top_k weights of either of its two
    rows; ties are broken toward the lower partner id.
    """
    n = a.size
    rows = np.concatenate([a, b])
    others = np.concatenate([b, a])
    weights = np.concatenate([w, w])
    pair_idx = np.concatenate([np.arange(n), np.arange(n)])

    order = np.lexsort((others, -weights, rows))
    rows_s = rows[order]
    new_row = np.empty(rows_s.size, dtype=bool)
    new_row[0] = True
    np.not_equal(rows_s[1:], rows_s[:-1], out=new_row[1:])
    starts = np.flatnonzero(new_row)
    counts = np.diff(np.append(starts, rows_s.size))
    first = np.repeat(starts, counts)
    pos = np.arange(rows_s.size) - first  # 0-based rank within row

    kept = np.unique(pair_idx[order][pos < top_k])
    mask = np.zeros(n, dtype=bool)
    mask[kept] = True
    return mask


def build_slice_matrix(
    counts: SliceCounts,
    measure: str = "llr",
    top_k: int = 200,
    min_joint: int = 1,
    min_score: float | None = None,
) -> SliceCoocMatrix:
    """Score counted pairs and prune to the most significant co-occurrents.

    Pairs below min_joint are dropped before scoring; weights that are not
    strictly positive (or below min_score, when set) are dropped; then each
    row keeps its top_k co-occurrents, with a pair retained if it survives
    in either row. Fully deterministic, including under weight ties.
    """
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}, got {measure!r}")
    if not counts.pair_counts:
        return SliceCoocMatrix(counts.slice_index, {}, measure, top_k)

    items = counts.pair_counts.items()
    a = np.fromiter((p[0] for p, _ in items), dtype=np.int64, count=len(counts.pair_counts))
    b = np.fromiter((p[1] for p, _ in items), dtype=np.int64, count=len(counts.pair_counts))
    joint = np.fromiter((j for _, j in items), dtype=np.int64, count=len(counts.pair_counts))

    keep = joint >= min_joint
    a, b, joint = a[keep], b[keep], joint[keep]
    if a.size == 0:
        return SliceCoocMatrix(counts.slice_index, {}, measure, top_k)

    units = counts.term_units
    na = np.fromiter((units[i] for i in a), dtype=np.float64, count=a.size)
    nb = np.fromiter((units[i] for i in b), dtype=np.float64, count=b.size)
    weights = _vector_scores(measure, joint.astype(np.float64), na, nb, float(counts.n_units))

    keep = np.isfinite(weights) & (weights > 0.0)
    if min_score is not None:
        keep &= weights >= min_score
    a, b, weights = a[keep], b[keep], weights[keep]
    if a.size == 0:
        return SliceCoocMatrix(counts.slice_index, {}, measure, top_k)

    mask = _topk_union_mask(a, b, weights, top_k)
    a, b, weights = a[mask], b[mask], weights[mask]

    order = np.lexsort((b, a))
    pairs = {
        (int(a[i]), int(b[i])): float(weights[i]) for i in order
    }
    return SliceCoocMatrix(counts.slice_index, pairs, measure, top_k)


@dataclass
class CoocConfig:
    """Options for building the per-slice matrices."""

    window: str = "sentence"
    token_window: int = 5
    measure: str = "llr"
    top_k: int = 200
    min_joint: int = 1
    min_score: float | None = None

    def __post_init__(self):
        if self.window not in WINDOWS:
            raise ValueError(f"window must be one of {WINDOWS}, got {self.window!r}")
        if self.measure not in MEASURES:
            raise ValueError(f"measure must be one of {MEASURES}, got {self.measure!r}")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")
        if self.min_joint < 1:
            raise ValueError(f"min_joint must be >= 1, got {self.min_joint}")
        if self.token_window < 1:
            raise ValueError(f"token_window must be >= 1, got {self.token_window}")


def _build_one_slice(corpus, vocabulary, options, t):
    counts = count_slice_cooccurrences(
        corpus.docs_in_slice(t),
        vocabulary,
        window=options.window,
        token_window=options.token_window,
        slice_index=t,
    )
    return build_slice_matrix(
        counts, options.measure, options.top_k, options.min_joint, options.min_score
    )


# Worker-process state, set once per worker by the pool initializer.
_WORKER_STATE: tuple = ()


def _pool_init(corpus, vocabulary, options):
    global _WORKER_STATE
    _WORKER_STATE = (corpus, vocabulary, options)


def _pool_build(t):
    corpus, vocabulary, options = _WORKER_STATE
    return _build_one_slice(corpus, vocabulary, options, t)


def _pool_context():
    methods = multiprocessing.get_all_start_methods()
    return multiprocessing.get_context("fork" if "fork" in methods else "spawn")


def build_corpus_matrices(
    corpus: SlicedCorpus,
    vocabulary: Vocabulary,
    options: CoocConfig | None = None,
    workers: int = 1,
) -> list[SliceCoocMatrix]:
    """Build one matrix per time slice, optionally in parallel.

    Slices share nothing, so the result is identical for any worker count;
    ordered pool mapping keeps the output in slice order.
    """
    if options is None:
        options = CoocConfig()
    indices = range(corpus.slice_count)
    if workers <= 1 or corpus.slice_count <= 1:
        return [_build_one_slice(corpus, vocabulary, options, t) for t in indices]

    ctx = _pool_context()
    with ctx.Pool(
        processes=min(workers, corpus.slice_count),
        initializer=_pool_init,
        initargs=(corpus, vocabulary, options),
    ) as pool:
        return pool.map(_pool_build, indices)


def save_matrices(matrices: list[SliceCoocMatrix], directory: str) -> list[str]:
    """Write one CSV per slice in the (slice_index, id_a, id_b, weight) format."""
    paths = []
    for m in matrices:
        path = os.path.join(directory, f"matrix_slice{m.slice_index:04d}.csv")
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["slice_index", "id_a", "id_b", "weight"])
            for (a, b), w in sorted(m.pairs.items()):
                writer.writerow([m.slice_index, a, b, repr(w)])
        paths.append(path)
    return paths


def load_matrices(paths: list[str], measure: str = "llr", top_k: int = 200) -> list[SliceCoocMatrix]:
    """Read matrices written by save_matrices."""
    matrices = []
    for path in paths:
        pairs: dict[tuple[int, int], float] = {}
        slice_index = 0
        with open(path, encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            for record in reader:
                slice_index = int(record["slice_index"])
                pairs[(int(record["id_a"]), int(record["id_b"]))] = float(record["weight"])
        matrices.append(SliceCoocMatrix(slice_index, pairs, measure, top_k))
    return matrices


def export_context_graph(
    matrix: SliceCoocMatrix, word: str, vocabulary: Vocabulary, path: str
) -> int:
    """Write the word's co-occurrence row as a CSV edge list.

    Columns source,target,weight, sorted by descending weight (ties by
    target term). This is the data behind a context-network drawing.
    Returns the number of edges written; a word with no co-occurrents in
    the slice produces a header-only file and a warning.
    """
    if word not in vocabulary:
        raise ValueError(f"word {word!r} is not in the vocabulary")
    row = matrix.row(vocabulary.id(word))
    edges = sorted(row.items(), key=lambda kv: (-kv[1], vocabulary.term(kv[0])))
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["source", "target", "weight"])
        for other, w in edges:
            writer.writerow([word, vocabulary.term(other), repr(w)])
    if not edges:
        log.warning(
            "word %r has no co-occurrents in slice %d; wrote empty edge list",
            word,
            matrix.slice_index,
        )
    return len(edges)
