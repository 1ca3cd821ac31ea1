"""Command-line interface: analyze, terms, graph, validate-config."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .config import ConfigError, build_config, config_as_dict, parse_config_file
from .corpus import IngestError
from .pipeline import StageError, aligned_term_report, export_graph, run_analysis

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_PARTIAL = 4


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="key = value configuration file")
    parser.add_argument("--input", help="override: corpus file path")
    parser.add_argument("--format", choices=["jsonl", "csv"], help="override: corpus format")
    parser.add_argument("--granularity", help="override: year/month/week/day")
    parser.add_argument("--output-dir", dest="output_dir", help="override: output directory")
    parser.add_argument("--workers", type=int, help="override: worker process count")
    parser.add_argument("--history", type=int, help="override: volatility window length")
    parser.add_argument("--top-k", dest="top_k", type=int, help="override: co-occurrents per row")
    parser.add_argument("--measure", help="override: llr/dice/mi/poisson")
    parser.add_argument("--window", help="override: sentence/token")
    parser.add_argument("--dispersion", help="override: iqr/stddev")
    parser.add_argument("--absent-policy", dest="absent_policy", help="override: max_rank/skip")
    parser.add_argument("--min-joint", dest="min_joint", type=int, help="override: min joint count")
    parser.add_argument(
        "--no-cache", dest="cache", action="store_const", const=False, default=None,
        help="disable the matrix disk cache",
    )


_OVERRIDE_KEYS = (
    "input", "format", "granularity", "output_dir", "workers", "history",
    "top_k", "measure", "window", "dispersion", "absent_policy", "min_joint", "cache",
)


def _load_config(args: argparse.Namespace, extra: dict | None = None):
    overrides = {k: getattr(args, k, None) for k in _OVERRIDE_KEYS}
    if extra:
        overrides.update(extra)
    return build_config(parse_config_file(args.config), overrides)


def _input_exit(e: StageError) -> int:
    if e.stage == "window-check":
        return EXIT_CONFIG
    if e.stage in ("ingest", "slice"):
        return EXIT_INPUT
    return EXIT_FAILURE


def cmd_analyze(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = run_analysis(config)
    print(f"analyze complete: {len(result.output_files)} files in {config.output_dir}")
    print(f"  documents={len(result.corpus.documents)} slices={result.corpus.slice_count} "
          f"vocabulary={result.vocabulary.size} cache_hit={result.cache_hit} "
          f"wall={result.wall_time:.2f}s")
    return EXIT_OK


def cmd_terms(args: argparse.Namespace) -> int:
    terms = [t.strip() for t in args.terms.split(",") if t.strip()]
    if not terms:
        raise ConfigError("terms: expected a comma-separated term list")
    config = _load_config(args, {"terms": terms})
    result = run_analysis(config)
    skipped = []
    for term in terms:
        try:
            for path in aligned_term_report(result, term, emit_plot=args.plot):
                print(f"wrote {path}")
        except KeyError:
            skipped.append(term)
    if skipped:
        print("skipped terms (not in vocabulary): " + ", ".join(skipped))
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = run_analysis(config)
    try:
        path = export_graph(result, args.word, args.slice)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyError:
        print(f"error: word {args.word!r} is not in the vocabulary", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {path}")
    return EXIT_OK


def cmd_validate_config(args: argparse.Namespace) -> int:
    config = _load_config(args)
    print(json.dumps(config_as_dict(config), indent=2, sort_keys=True))
    print("configuration OK")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextvol",
        description="Context volatility of terms in time-stamped document collections",
    )
    parser.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full pipeline and write report files")
    _add_override_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("terms", help="aligned volatility/frequency report per term")
    _add_override_flags(p)
    p.add_argument("--terms", required=True, help="comma-separated terms")
    p.add_argument("--plot", action="store_true", help="also write an SVG overlay per term")
    p.set_defaults(func=cmd_terms)

    p = sub.add_parser("graph", help="export one word's co-occurrence edge list")
    _add_override_flags(p)
    p.add_argument("--word", required=True)
    p.add_argument("--slice", type=int, required=True, help="slice index (0-based)")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("validate-config", help="check a configuration and echo it")
    _add_override_flags(p)
    p.set_defaults(func=cmd_validate_config)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as e:
        print(f"error: {e}", file=sys.stderr)
        return _input_exit(e)
    except IngestError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
