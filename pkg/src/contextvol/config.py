"""Pipeline configuration: key-value file, flag overrides, validation."""

from __future__ import annotations

import datetime as dt
import os
from dataclasses import dataclass, field, fields

from .cooccurrence import MEASURES, WINDOWS
from .corpus import GRANULARITIES
from .volatility import ABSENT_POLICIES, DISPERSIONS

OUTPUT_DIR_ENV = "CONTEXTVOL_OUTPUT_DIR"


class ConfigError(ValueError):
    """Invalid or inconsistent pipeline configuration."""


@dataclass
class PipelineConfig:
    """Everything one end-to-end run needs; see parse/validate for rules."""

    input: str = ""
    format: str = "jsonl"
    id_field: str = "id"
    date_field: str = "date"
    text_field: str = "text"
    granularity: str = "month"
    date_start: dt.date | None = None
    date_end: dt.date | None = None
    topic_table: str | None = None
    topic: str | None = None
    min_share: float = 0.3
    lowercase: bool = True
    stopwords: str | None = None
    blocklist: str | None = None
    lemma_map: str | None = None
    min_doc_freq: int = 3
    relative_low: float = 0.01
    relative_high: float = 0.99
    window: str = "sentence"
    token_window: int = 5
    measure: str = "llr"
    top_k: int = 200
    min_joint: int = 1
    min_score: float | None = None
    history: int = 6
    dispersion: str = "iqr"
    absent_policy: str = "max_rank"
    output_dir: str = ""
    workers: int = 1
    terms: list[str] = field(default_factory=list)
    cache: bool = True


_BOOL_VALUES = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _coerce(name: str, kind, raw: str):
    raw = raw.strip()
    if kind is bool:
        if raw.lower() not in _BOOL_VALUES:
            raise ConfigError(f"{name}: expected a boolean, got {raw!r}")
        return _BOOL_VALUES[raw.lower()]
    if kind is int:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected an integer, got {raw!r}") from None
    if kind is float:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected a number, got {raw!r}") from None
    if kind is dt.date:
        try:
            return dt.date.fromisoformat(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected an ISO date (YYYY-MM-DD), got {raw!r}") from None
    if kind is list:
        return [t.strip() for t in raw.split(",") if t.strip()]
    return raw


_FIELD_KINDS = {
    "date_start": dt.date,
    "date_end": dt.date,
    "min_share": float,
    "lowercase": bool,
    "min_doc_freq": int,
    "relative_low": float,
    "relative_high": float,
    "token_window": int,
    "top_k": int,
    "min_joint": int,
    "min_score": float,
    "history": int,
    "workers": int,
    "terms": list,
    "cache": bool,
}


def parse_config_file(path: str) -> dict[str, str]:
    """Read `key = value` lines; '#' starts a comment, blanks are skipped."""
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path} line {lineno}: expected 'key = value'")
                key, _, raw = line.partition("=")
                values[key.strip()] = raw.strip()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    return values


def build_config(file_values: dict[str, str], overrides: dict[str, object]) -> PipelineConfig:
    """Merge config-file values with overrides (overrides win) and validate.

    The CONTEXTVOL_OUTPUT_DIR environment variable overrides the config
    file's output_dir but loses to an explicit flag override.
    """
    known = {f.name for f in fields(PipelineConfig)}
    config = PipelineConfig()
    for key, raw in file_values.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        setattr(config, key, _coerce(key, _FIELD_KINDS.get(key, str), raw))
    env_out = os.environ.get(OUTPUT_DIR_ENV)
    if env_out:
        config.output_dir = env_out
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in known:
            raise ConfigError(f"unknown config override {key!r}")
        setattr(config, key, value)
    validate_config(config)
    return config


def validate_config(config: PipelineConfig) -> None:
    """Check ranges, enumerations, and that referenced files exist."""
    if not config.input:
        raise ConfigError("input is required")
    if config.format not in ("jsonl", "csv"):
        raise ConfigError(f"format must be 'jsonl' or 'csv', got {config.format!r}")
    if config.granularity not in GRANULARITIES:
        raise ConfigError(f"granularity must be one of {GRANULARITIES}")
    if config.window not in WINDOWS:
        raise ConfigError(f"window must be one of {WINDOWS}")
    if config.measure not in MEASURES:
        raise ConfigError(f"measure must be one of {MEASURES}")
    if config.dispersion not in DISPERSIONS:
        raise ConfigError(f"dispersion must be one of {DISPERSIONS}")
    if config.absent_policy not in ABSENT_POLICIES:
        raise ConfigError(f"absent_policy must be one of {ABSENT_POLICIES}")
    if config.min_doc_freq < 1:
        raise ConfigError("min_doc_freq must be >= 1")
    if not 0.0 <= config.relative_low < config.relative_high <= 1.0:
        raise ConfigError("need 0 <= relative_low < relative_high <= 1")
    if config.top_k < 1:
        raise ConfigError("top_k must be >= 1")
    if config.min_joint < 1:
        raise ConfigError("min_joint must be >= 1")
    if config.token_window < 1:
        raise ConfigError("token_window must be >= 1")
    if config.history < 1:
        raise ConfigError("history must be >= 1")
    if config.workers < 1:
        raise ConfigError("workers must be >= 1")
    if not 0.0 < config.min_share <= 1.0:
        raise ConfigError("min_share must be in (0, 1]")
    if config.date_start and config.date_end and config.date_start > config.date_end:
        raise ConfigError("date_start is after date_end")
    if (config.topic is None) != (config.topic_table is None):
        raise ConfigError("topic and topic_table must be given together")
    if not config.output_dir:
        raise ConfigError("output_dir is required")
    for name in ("input", "topic_table", "stopwords", "blocklist", "lemma_map"):
        path = getattr(config, name)
        if path is not None and path != "" and not os.path.exists(path):
            raise ConfigError(f"{name} file does not exist: {path}")


def config_as_dict(config: PipelineConfig) -> dict:
    """JSON-friendly echo of the resolved configuration."""
    out = {}
    for f in fields(PipelineConfig):
        value = getattr(config, f.name)
        if isinstance(value, dt.date):
            value = value.isoformat()
        out[f.name] = value
    return out
