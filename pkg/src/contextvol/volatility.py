"""Context volatility: rank matrices per word and windowed dispersion scores.

For a word w and a window of time slices, every co-occurrent of w gets a
fractional rank per slice (rank 1 = strongest weight, ties averaged). A
co-occurrent missing from a slice is ranked one worse than everything
present there (policy "max_rank") or left out of that slice ("skip").
The volatility of w over the window is the mean, across its co-occurrents,
of the dispersion (interquartile range by default) of each co-occurrent's
rank sequence. Taking the window to be the whole corpus yields one global
constant per word; shorter back-looking windows yield a time series.

Per-word computations are independent and run over a read-only set of
slice matrices, so they parallelize freely without changing results.
"""

from __future__ import annotations

import logging
import math
import multiprocessing
from dataclasses import dataclass

import numpy as np

from .cooccurrence import SliceCoocMatrix, _pool_context
from .preprocess import Vocabulary

log = logging.getLogger(__name__)

ABSENT_POLICIES = ("max_rank", "skip")
DISPERSIONS = ("iqr", "stddev")


@dataclass
class VolatilityConfig:
    """Window length and dispersion choices for volatility scores."""

    history: int
    dispersion: str = "iqr"
    absent_policy: str = "max_rank"

    def __post_init__(self):
        if self.history < 1:
            raise ValueError(f"history must be >= 1, got {self.history}")
        if self.dispersion not in DISPERSIONS:
            raise ValueError(f"dispersion must be one of {DISPERSIONS}, got {self.dispersion!r}")
        if self.absent_policy not in ABSENT_POLICIES:
            raise ValueError(
                f"absent_policy must be one of {ABSENT_POLICIES}, got {self.absent_policy!r}"
            )


def slice_ranks(matrix: SliceCoocMatrix, word: int) -> dict[int, float]:
    """Fractional ranks of a word's co-occurrents in one slice.

    The strongest weight gets rank 1; equal weights share the average of
    the positions they span. Empty row yields an empty map.
    """
    row = matrix.row(word)
    if not row:
        return {}
    items = sorted(row.items(), key=lambda kv: (-kv[1], kv[0]))
    ranks: dict[int, float] = {}
    i = 0
    while i < len(items):
        j = i
        while j < len(items) and items[j][1] == items[i][1]:
            j += 1
        avg = ((i + 1) + j) / 2  # mean of 1-based positions i+1 .. j
        for k in range(i, j):
            ranks[items[k][0]] = avg
        i = j
    return ranks


def interquartile_range(values) -> float:
    """Q3 - Q1 with quartiles by linear interpolation of order statistics.

    For sorted x_1..x_n the q-quantile sits at position 1 + q(n-1),
    interpolating linearly between the neighbouring order statistics.
    """
    xs = sorted(float(v) for v in values)
    n = len(xs)
    if n == 0:
        raise ValueError("interquartile_range of empty input")

    def quantile(q: float) -> float:
        pos = q * (n - 1)
        f = math.floor(pos)
        g = pos - f
        if f + 1 >= n:
            return xs[f]
        return xs[f] + g * (xs[f + 1] - xs[f])

    return quantile(0.75) - quantile(0.25)


def _iqr_sorted_rows(mat: np.ndarray) -> np.ndarray:
    """Row-wise IQR of a 2-D array whose rows are already sorted ascending.

    Same interpolation rule as interquartile_range, vectorized.
    """
    n = mat.shape[1]
    if n == 1:
        return np.zeros(mat.shape[0])

    def quantile(q: float) -> np.ndarray:
        pos = q * (n - 1)
        f = math.floor(pos)
        g = pos - f
        if f + 1 >= n:
            return mat[:, f]
        return mat[:, f] + g * (mat[:, f + 1] - mat[:, f])

    return quantile(0.75) - quantile(0.25)


@dataclass
class RankMatrix:
    """Per-slice ranks of one word's co-occurrents over a window of slices.

    Rows are the union of co-occurrents observed anywhere in the window
    (ascending term id); columns are the window's slices. `present` marks
    cells where the pair was actually significant; absent cells hold the
    policy fill (worst present rank + 1, or NaN under "skip").
    """

    word: int
    cooc_ids: np.ndarray
    ranks: np.ndarray
    present: np.ndarray
    absent_policy: str

    @property
    def empty(self) -> bool:
        return self.cooc_ids.size == 0


def build_rank_matrix(
    matrices: list[SliceCoocMatrix], word: int, absent_policy: str = "max_rank"
) -> RankMatrix:
    """Assemble the rank matrix of `word` over the given window of slices."""
    if not matrices:
        raise ValueError("need at least one slice matrix")
    if absent_policy not in ABSENT_POLICIES:
        raise ValueError(f"absent_policy must be one of {ABSENT_POLICIES}")
    per_slice = [slice_ranks(m, word) for m in matrices]
    union = sorted(set().union(*per_slice))
    if not union:
        log.debug("word id %d has no co-occurrents in the window", word)
    cooc_ids = np.array(union, dtype=np.int64)
    h = len(matrices)
    ranks = np.empty((len(union), h))
    present = np.zeros((len(union), h), dtype=bool)
    for j, slice_map in enumerate(per_slice):
        fill = float(len(slice_map) + 1) if absent_policy == "max_rank" else float("nan")
        for i, c in enumerate(union):
            r = slice_map.get(c)
            if r is None:
                ranks[i, j] = fill
            else:
                ranks[i, j] = r
                present[i, j] = True
    return RankMatrix(word, cooc_ids, ranks, present, absent_policy)


def _dispersion_rows(ranks: np.ndarray, absent_policy: str, dispersion: str) -> np.ndarray:
    if absent_policy == "max_rank":
        if dispersion == "iqr":
            return _iqr_sorted_rows(np.sort(ranks, axis=1))
        return np.std(ranks, axis=1)  # population std: 0 on constant rows
    out = np.empty(ranks.shape[0])
    for i in range(ranks.shape[0]):
        row = ranks[i]
        row = row[~np.isnan(row)]
        out[i] = interquartile_range(row) if dispersion == "iqr" else float(np.std(row))
    return out


def _cv_from_ranks(ranks: np.ndarray, absent_policy: str, dispersion: str) -> float:
    if ranks.shape[0] == 0:
        return 0.0
    return float(np.mean(_dispersion_rows(ranks, absent_policy, dispersion)))


def context_volatility(
    matrices: list[SliceCoocMatrix], word: int, config: VolatilityConfig
) -> float:
    """Volatility of one word over a window of exactly `history` slices.

    The mean over the word's co-occurrents (union across the window) of the
    dispersion of each co-occurrent's rank sequence. A word with no
    co-occurrents anywhere in the window scores 0.
    """
    if len(matrices) != config.history:
        raise ValueError(
            f"window holds {len(matrices)} slices but history is {config.history}"
        )
    rm = build_rank_matrix(matrices, word, config.absent_policy)
    return _cv_from_ranks(rm.ranks, config.absent_policy, config.dispersion)


@dataclass
class VolatilitySeries:
    """Windowed volatility values for one word.

    values[i] covers the window ending at slice end_indices[i]; with
    history equal to the slice count the series degenerates to the single
    global constant.
    """

    word: int | str
    values: np.ndarray
    history: int
    slice_count: int

    @property
    def end_indices(self) -> range:
        return range(self.history - 1, self.slice_count)

    @property
    def global_constant(self) -> float | None:
        return float(self.values[0]) if self.history == self.slice_count else None


class SliceRankIndex:
    """Precomputed per-slice rank rows, shared by all per-word computations.

    Built once from the slice matrices (vectorized fractional ranking per
    slice), then queried per word and window. Read-only after construction.
    """

    def __init__(self, matrices: list[SliceCoocMatrix]):
        self.slice_count = len(matrices)
        self._rows = [self._rank_rows(m) for m in matrices]

    @staticmethod
    def _rank_rows(matrix: SliceCoocMatrix) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        """word id -> (co-occurrent ids ascending, their fractional ranks)."""
        if not matrix.pairs:
            return {}
        m = len(matrix.pairs)
        a = np.fromiter((p[0] for p in matrix.pairs), np.int64, m)
        b = np.fromiter((p[1] for p in matrix.pairs), np.int64, m)
        w = np.fromiter(matrix.pairs.values(), np.float64, m)
        rows = np.concatenate([a, b])
        others = np.concatenate([b, a])
        weights = np.concatenate([w, w])

        order = np.lexsort((others, -weights, rows))
        rows_s = rows[order]
        others_s = others[order]
        w_s = weights[order]
        n = rows_s.size

        new_row = np.empty(n, dtype=bool)
        new_row[0] = True
        np.not_equal(rows_s[1:], rows_s[:-1], out=new_row[1:])
        starts = np.flatnonzero(new_row)
        counts = np.diff(np.append(starts, n))
        first = np.repeat(starts, counts)
        pos = (np.arange(n) - first + 1).astype(np.float64)  # 1-based within row

        new_grp = new_row.copy()
        new_grp[1:] |= w_s[1:] != w_s[:-1]
        grp = np.cumsum(new_grp) - 1
        franks = (np.bincount(grp, weights=pos) / np.bincount(grp))[grp]

        order2 = np.lexsort((others_s, rows_s))
        rid = rows_s[order2]
        oid = others_s[order2]
        frk = franks[order2]
        uniq, s_idx = np.unique(rid, return_index=True)
        e_idx = np.append(s_idx[1:], n)
        return {int(r): (oid[s:e], frk[s:e]) for r, s, e in zip(uniq, s_idx, e_idx)}

    def window_ranks(
        self, word: int, lo: int, hi: int, absent_policy: str
    ) -> tuple[np.ndarray, np.ndarray]:
        """(union ids, rank matrix) for slices lo..hi inclusive."""
        entries = [self._rows[t].get(word) for t in range(lo, hi + 1)]
        id_arrays = [e[0] for e in entries if e is not None]
        if not id_arrays:
            return np.empty(0, dtype=np.int64), np.empty((0, hi - lo + 1))
        union = np.unique(np.concatenate(id_arrays))
        ranks = np.empty((union.size, len(entries)))
        nan = float("nan")
        for j, entry in enumerate(entries):
            if entry is None:
                ranks[:, j] = 1.0 if absent_policy == "max_rank" else nan
                continue
            ids, frk = entry
            idx = np.minimum(np.searchsorted(ids, union), ids.size - 1)
            found = ids[idx] == union
            fill = float(ids.size + 1) if absent_policy == "max_rank" else nan
            ranks[:, j] = np.where(found, frk[idx], fill)
        return union, ranks

    def window_volatility(self, word: int, lo: int, hi: int, config: VolatilityConfig) -> float:
        _, ranks = self.window_ranks(word, lo, hi, config.absent_policy)
        return _cv_from_ranks(ranks, config.absent_policy, config.dispersion)


def volatility_series(
    matrices: list[SliceCoocMatrix],
    word: int,
    config: VolatilityConfig,
    index: SliceRankIndex | None = None,
) -> VolatilitySeries:
    """Back-looking windowed volatility over all slices.

    One value per window end, from slice history-1 to the last slice
    (length T - history + 1); history equal to T yields the length-1
    series holding the word's global constant.
    """
    total = len(matrices)
    if config.history > total:
        raise ValueError(f"history {config.history} exceeds slice count {total}")
    if index is None:
        index = SliceRankIndex(matrices)
    values = np.empty(total - config.history + 1)
    for end in range(config.history - 1, total):
        values[end - config.history + 1] = index.window_volatility(
            word, end - config.history + 1, end, config
        )
    return VolatilitySeries(word=word, values=values, history=config.history, slice_count=total)


# Worker-process state for parallel per-word scoring.
_TV_STATE: tuple = ()


def _tv_init(matrices, dispersion, absent_policy):
    global _TV_STATE
    config = VolatilityConfig(
        history=len(matrices), dispersion=dispersion, absent_policy=absent_policy
    )
    _TV_STATE = (SliceRankIndex(matrices), config)


def _tv_chunk(word_ids):
    index, config = _TV_STATE
    last = index.slice_count - 1
    return [index.window_volatility(w, 0, last, config) for w in word_ids]


def global_volatility_all(
    matrices: list[SliceCoocMatrix],
    vocabulary: Vocabulary,
    dispersion: str = "iqr",
    absent_policy: str = "max_rank",
    workers: int = 1,
) -> np.ndarray:
    """Full-span volatility constant for every vocabulary term, by term id."""
    if not matrices:
        raise ValueError("need at least one slice matrix")
    ids = list(range(vocabulary.size))
    if workers <= 1:
        _tv_init(matrices, dispersion, absent_policy)
        values = _tv_chunk(ids)
    else:
        chunks = [c.tolist() for c in np.array_split(np.array(ids), workers * 4) if c.size]
        ctx = _pool_context()
        with ctx.Pool(
            processes=workers,
            initializer=_tv_init,
            initargs=(matrices, dispersion, absent_policy),
        ) as pool:
            values = [v for chunk in pool.map(_tv_chunk, chunks) for v in chunk]
    return np.array(values)


def top_volatile_terms(
    matrices: list[SliceCoocMatrix],
    vocabulary: Vocabulary,
    k: int | None = None,
    dispersion: str = "iqr",
    absent_policy: str = "max_rank",
    workers: int = 1,
) -> list[tuple[str, float]]:
    """Terms ranked by their global volatility constant, descending.

    Ties are broken lexicographically; k limits the result (None = all).
    """
    values = global_volatility_all(matrices, vocabulary, dispersion, absent_policy, workers)
    ranked = sorted(
        ((vocabulary.term(i), float(values[i])) for i in range(vocabulary.size)),
        key=lambda tv: (-tv[1], tv[0]),
    )
    return ranked if k is None else ranked[:k]
