"""End-to-end analysis pipeline: stages, disk cache, report files.

Stage order: ingest -> slice -> (sub-corpus filters) -> window check ->
tokenize -> vocabulary -> matrices -> volatility -> reports -> manifest.
Any stage failure aborts with the stage name and cause, and every output
file written so far is removed.

The per-slice matrices dominate the cost, so they are cached on disk keyed
by a content hash of (corpus bytes, preprocessing options, co-occurrence
options). Re-running with a different history window reuses the cache.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import pickle
import time
from dataclasses import dataclass, field

import numpy as np

from . import cooccurrence, corpus as corpus_mod, metrics, preprocess, volatility
from .config import PipelineConfig, config_as_dict
from .plotting import two_series_svg

log = logging.getLogger(__name__)

MANIFEST_NAME = "run_manifest.json"


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name and the cause."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class AnalysisResult:
    """Everything cmd-level code needs after a run."""

    config: PipelineConfig
    corpus: corpus_mod.SlicedCorpus
    vocabulary: preprocess.Vocabulary
    matrices: list[cooccurrence.SliceCoocMatrix]
    global_values: np.ndarray  # full-span volatility per term id
    output_files: list[str] = field(default_factory=list)
    cache_hit: bool = False
    wall_time: float = 0.0


def _file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _cache_key(config: PipelineConfig) -> str:
    """Hash of everything the matrices depend on (volatility options excluded)."""
    parts = {
        "input": _file_digest(config.input),
        "format": config.format,
        "fields": [config.id_field, config.date_field, config.text_field],
        "granularity": config.granularity,
        "date_start": str(config.date_start),
        "date_end": str(config.date_end),
        "topic": config.topic,
        "topic_table": _file_digest(config.topic_table) if config.topic_table else None,
        "min_share": config.min_share,
        "lowercase": config.lowercase,
        "stopwords": _file_digest(config.stopwords) if config.stopwords else None,
        "blocklist": _file_digest(config.blocklist) if config.blocklist else None,
        "lemma_map": _file_digest(config.lemma_map) if config.lemma_map else None,
        "min_doc_freq": config.min_doc_freq,
        "relative_low": config.relative_low,
        "relative_high": config.relative_high,
        "window": config.window,
        "token_window": config.token_window,
        "measure": config.measure,
        "top_k": config.top_k,
        "min_joint": config.min_joint,
        "min_score": config.min_score,
    }
    return hashlib.sha256(json.dumps(parts, sort_keys=True).encode()).hexdigest()[:32]


class _Run:
    """Tracks written files so a failed run can clean up after itself."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.files: list[str] = []
        self.stage = "setup"

    def path(self, name: str) -> str:
        p = os.path.join(self.config.output_dir, name)
        self.files.append(p)
        return p

    def cleanup(self):
        for p in self.files:
            try:
                os.remove(p)
            except OSError:
                pass


def _term_filename(kind: str, term: str) -> str:
    # Tokenizer output is letter/digit runs, so terms are filesystem-safe.
    return f"{kind}_{term}.csv"


def _write_vocabulary(run: _Run, vocab: preprocess.Vocabulary) -> None:
    with open(run.path("vocabulary.csv"), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["id", "term", "doc_freq", "corpus_freq"])
        for i, term in enumerate(vocab.terms):
            writer.writerow([i, term, int(vocab.doc_freq[i]), int(vocab.term_counts[i])])


def _write_volatility_series(path: str, term: str, series, dates) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["term", "slice_start_date", "cv"])
        for end, value in zip(series.end_indices, series.values):
            writer.writerow([term, dates[end].isoformat(), repr(float(value))])


def run_analysis(config: PipelineConfig) -> AnalysisResult:
    """Execute the full pipeline and write all report files."""
    started = time.perf_counter()
    os.makedirs(config.output_dir, exist_ok=True)
    run = _Run(config)
    try:
        return _run_stages(run, config, started)
    except StageError:
        run.cleanup()
        raise
    except Exception as e:  # pragma: no cover - safety net
        run.cleanup()
        raise StageError(run.stage, e) from e


def _run_stages(run: _Run, config: PipelineConfig, started: float) -> AnalysisResult:
    run.stage = "ingest"
    try:
        documents = corpus_mod.ingest_documents(
            config.input, config.format, config.id_field, config.date_field, config.text_field
        )
    except (corpus_mod.IngestError, OSError, ValueError) as e:
        raise StageError("ingest", e) from e

    run.stage = "slice"
    try:
        sliced = corpus_mod.assign_time_slices(documents, config.granularity)
        if config.date_start or config.date_end:
            start = config.date_start or min(d.timestamp for d in documents)
            end = config.date_end or max(d.timestamp for d in documents)
            sliced = corpus_mod.filter_by_date_range(sliced, start, end)
        if config.topic and config.topic_table:
            table = corpus_mod.DocTopicTable.from_csv(config.topic_table)
            sliced = corpus_mod.filter_by_topic_share(sliced, table, config.topic, config.min_share)
        if not sliced.documents:
            raise ValueError("no documents left after sub-corpus filters")
    except StageError:
        raise
    except Exception as e:
        raise StageError("slice", e) from e

    run.stage = "window-check"
    if config.history > sliced.slice_count:
        raise StageError(
            "window-check",
            ValueError(
                f"history {config.history} exceeds the corpus's {sliced.slice_count} slices"
            ),
        )

    run.stage = "tokenize"
    try:
        lemma_map = preprocess.load_lemma_map(config.lemma_map) if config.lemma_map else None
        blocklist = preprocess.load_term_file(config.blocklist) if config.blocklist else None
        preprocess.tokenize_corpus(sliced, config.lowercase, lemma_map, blocklist)
    except Exception as e:
        raise StageError("tokenize", e) from e

    run.stage = "vocabulary"
    try:
        stopwords = (
            frozenset(preprocess.load_term_file(config.stopwords))
            if config.stopwords
            else frozenset()
        )
        pruning = preprocess.PruningConfig(
            min_doc_freq=config.min_doc_freq,
            relative_low=config.relative_low,
            relative_high=config.relative_high,
            stopwords=stopwords,
        )
        vocab = preprocess.build_vocabulary(sliced, pruning)
    except Exception as e:
        raise StageError("vocabulary", e) from e
    _write_vocabulary(run, vocab)

    run.stage = "matrices"
    try:
        matrices, cache_hit = _matrices_with_cache(config, sliced, vocab)
    except Exception as e:
        raise StageError("matrices", e) from e
    for p in cooccurrence.save_matrices(matrices, config.output_dir):
        run.files.append(p)

    run.stage = "volatility"
    try:
        global_values = volatility.global_volatility_all(
            matrices,
            vocab,
            dispersion=config.dispersion,
            absent_policy=config.absent_policy,
            workers=config.workers,
        )
    except Exception as e:
        raise StageError("volatility", e) from e
    ranked = sorted(
        ((vocab.term(i), float(global_values[i])) for i in range(vocab.size)),
        key=lambda tv: (-tv[1], tv[0]),
    )
    with open(run.path("top_volatile.csv"), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["term", "volatility"])
        for term, value in ranked:
            writer.writerow([term, repr(value)])

    run.stage = "reports"
    dates = [sl.start for sl in sliced.slices]
    vol_config = volatility.VolatilityConfig(
        history=config.history,
        dispersion=config.dispersion,
        absent_policy=config.absent_policy,
    )
    try:
        index = volatility.SliceRankIndex(matrices) if config.terms else None
        for term in config.terms:
            if term not in vocab:
                log.warning("requested term %r is not in the vocabulary; skipped", term)
                continue
            series = volatility.volatility_series(matrices, vocab.id(term), vol_config, index)
            _write_volatility_series(
                run.path(_term_filename("volatility", term)), term, series, dates
            )
            freq = metrics.relative_frequency_series(sliced, term)
            metrics.export_series_csv(
                run.path(_term_filename("frequency", term)),
                f"frequency:{term}",
                dates,
                freq.values,
            )
    except Exception as e:
        raise StageError("reports", e) from e

    run.stage = "manifest"
    wall = time.perf_counter() - started
    manifest = {
        "config": config_as_dict(config),
        "corpus": {
            "documents": len(sliced.documents),
            "slices": sliced.slice_count,
            "first_slice_start": dates[0].isoformat(),
            "last_slice_start": dates[-1].isoformat(),
            "vocabulary_size": vocab.size,
            "sentences": sum(len(d.sentences) for d in sliced.documents),
            "tokens": int(vocab.slice_counts.sum()),
        },
        "cache_hit": cache_hit,
        "wall_time_seconds": round(wall, 3),
    }
    with open(run.path(MANIFEST_NAME), "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")

    return AnalysisResult(
        config=config,
        corpus=sliced,
        vocabulary=vocab,
        matrices=matrices,
        global_values=global_values,
        output_files=list(run.files),
        cache_hit=cache_hit,
        wall_time=wall,
    )


def _matrices_with_cache(config, sliced, vocab):
    options = cooccurrence.CoocConfig(
        window=config.window,
        token_window=config.token_window,
        measure=config.measure,
        top_k=config.top_k,
        min_joint=config.min_joint,
        min_score=config.min_score,
    )
    cache_file = None
    if config.cache:
        cache_dir = os.path.join(config.output_dir, ".cache")
        os.makedirs(cache_dir, exist_ok=True)
        cache_file = os.path.join(cache_dir, _cache_key(config) + ".pkl")
        if os.path.exists(cache_file):
            with open(cache_file, "rb") as f:
                matrices = pickle.load(f)
            log.info("matrix cache hit (%s)", os.path.basename(cache_file))
            return matrices, True

    matrices = cooccurrence.build_corpus_matrices(sliced, vocab, options, workers=config.workers)
    if cache_file:
        with open(cache_file, "wb") as f:
            pickle.dump(matrices, f, protocol=4)
    return matrices, False


def aligned_term_report(result: AnalysisResult, term: str, emit_plot: bool = False) -> list[str]:
    """Min-max aligned volatility and frequency for one term, as CSV (+SVG).

    Both series are restricted to the window ends (slices history-1 .. T-1)
    so they have equal length, then scaled to [0, 1] for overlaying.
    Raises KeyError for a term outside the vocabulary.
    """
    config = result.config
    if term not in result.vocabulary:
        raise KeyError(term)
    vol_config = volatility.VolatilityConfig(
        history=config.history,
        dispersion=config.dispersion,
        absent_policy=config.absent_policy,
    )
    series = volatility.volatility_series(
        result.matrices, result.vocabulary.id(term), vol_config
    )
    freq = metrics.relative_frequency_series(result.corpus, term)
    window_freq = freq.values[config.history - 1 :]
    vol_scaled, freq_scaled = metrics.min_max_align(series.values, window_freq)

    dates = [result.corpus.slices[e].start for e in series.end_indices]
    csv_path = os.path.join(config.output_dir, f"term_{term}_aligned.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["term", "slice_start_date", "volatility", "frequency"])
        for date, v, fr in zip(dates, vol_scaled, freq_scaled):
            writer.writerow([term, date.isoformat(), repr(float(v)), repr(float(fr))])
    written = [csv_path]

    if emit_plot:
        svg_path = os.path.join(config.output_dir, f"term_{term}.svg")
        two_series_svg(
            svg_path,
            vol_scaled,
            freq_scaled,
            label_a=f"volatility ({term})",
            label_b=f"relative frequency ({term})",
            title=term,
            x_labels=(dates[0].isoformat(), dates[-1].isoformat()),
        )
        written.append(svg_path)
    return written


def export_graph(result: AnalysisResult, word: str, slice_index: int) -> str:
    """Edge list of `word`'s co-occurrence row in one slice."""
    total = len(result.matrices)
    if not 0 <= slice_index < total:
        raise ValueError(f"slice index {slice_index} out of range [0, {total - 1}]")
    if word not in result.vocabulary:
        raise KeyError(word)
    path = os.path.join(result.config.output_dir, f"graph_{word}_slice{slice_index:04d}.csv")
    cooccurrence.export_context_graph(
        result.matrices[slice_index], word, result.vocabulary, path
    )
    return path
