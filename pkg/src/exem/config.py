"""Flat key=value pipeline configuration."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .skipgram.trainer import TrainConfig
from .walker import WalkConfig

logger = logging.getLogger(__name__)

OUTPUT_ENV = "EXEM_OUTPUT_DIR"
TASKS = ("classify", "linkpred", "recommend")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    graph: str | None = None
    labels: str | None = None
    output_dir: str = field(default_factory=lambda: os.environ.get(OUTPUT_ENV, "exem-out"))
    variant: str = "w2v"
    walk_mode: str = "exem-relaxed"
    walks_per_start: int = 10
    walk_length: int = 80
    walks_total: int | None = None
    dim: int = 128
    window: int = 10
    epochs: int = 5
    negatives: int = 5
    learning_rate: float = 0.025
    min_ngram: int = 3
    max_ngram: int = 6
    buckets: int = 2**21
    sample: float = 0.0
    seed: int = 0
    workers: int = 1
    eval: tuple = ("classify",)
    train_ratio: float = 0.5
    reps: int = 10
    op: str = "hadamard"
    hide_ratio: float = 0.5
    topic: str | None = None
    k: int = 10

    def walk_config(self) -> WalkConfig:
        return WalkConfig(self.walks_per_start, self.walk_length, self.walk_mode, self.seed,
                          self.walks_total, self.workers)

    def train_config(self) -> TrainConfig:
        return TrainConfig(self.dim, self.window, self.epochs, self.negatives, self.learning_rate,
                           self.min_ngram, self.max_ngram, self.buckets, self.sample, self.seed,
                           self.workers)

    @property
    def base_modes(self) -> tuple[str, ...]:
        return ("w2v", "ft") if self.variant in ("com", "sum", "avg") else (self.variant,)

    def validate(self) -> "PipelineConfig":
        if self.graph is None:
            raise ConfigError("no graph file given")
        for key in ("graph", "labels"):
            path = getattr(self, key)
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{key} file not found: {path}")
        if self.variant not in ("w2v", "ft", "com", "sum", "avg"):
            raise ConfigError(f"unknown variant {self.variant!r}")
        unknown = set(self.eval) - set(TASKS)
        if unknown:
            raise ConfigError(f"unknown eval task(s): {sorted(unknown)}")
        if {"classify", "recommend"} & set(self.eval) and self.labels is None:
            raise ConfigError("classification and recommendation need a labels file")
        if "recommend" in self.eval and self.topic is None:
            raise ConfigError("recommendation needs a topic")
        self.walk_config()
        self.train_config()
        return self


_FIELDS = {f.name: f for f in fields(PipelineConfig)}
_ALIASES = {"walks-per-start": "walks_per_start", "length": "walk_length", "mode": "walk_mode",
            "walks-total": "walks_total", "train-ratio": "train_ratio",
            "hide-ratio": "hide_ratio", "output-dir": "output_dir", "lr": "learning_rate"}


def _coerce(key: str, raw):
    if raw is None or raw == "":
        return None if _FIELDS[key].default is None else _FIELDS[key].default
    if key == "eval":
        if isinstance(raw, (tuple, list)):
            return tuple(raw)
        return tuple(s.strip() for s in str(raw).split(",") if s.strip())
    default = _FIELDS[key].default
    if key == "walks_total":
        return int(raw)
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return str(raw)


def _normalize_key(key: str) -> str:
    key = key.strip()
    key = _ALIASES.get(key, key).replace("-", "_")
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    return key


def read_config_file(path) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            values[_normalize_key(key)] = value.strip()
    return values


def parse_config(path=None, overrides: dict | None = None) -> PipelineConfig:
    """Resolve a config from an optional file plus flag overrides (flags win).

    Unset fields keep the defaults: 10 walks per start, walk length 80,
    128 dimensions, window 10.
    """
    values = read_config_file(path) if path is not None else {}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        key = _normalize_key(key)
        if key in values and str(values[key]) != str(value):
            logger.info("flag overrides config file: %s=%s (file had %s)", key, value, values[key])
        values[key] = value
    try:
        return replace(PipelineConfig(), **{k: _coerce(k, v) for k, v in values.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def config_lines(cfg: PipelineConfig) -> list[str]:
    out = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            value = ",".join(value)
        out.append(f"{f.name}={'' if value is None else value}")
    return out
