"""Sweep configuration: flat JSON document, every key overridable by a CLI
flag of the same name."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError

MODELS = ("cm", "ba", "ev")
ALGORITHMS = ("lp", "fastgreedy", "louvain")

DEFAULT_MU_VALUES = tuple(round(0.05 * i, 2) for i in range(1, 20))


@dataclass(frozen=True)
class SweepConfig:
    model: str = "cm"
    n: int = 5000
    gamma: float = 3.0            # cm only
    k_max: int = 90               # cm only
    avg_k: float = 30.0           # cm only
    m: int = 15                   # ba / ev
    m0: int | None = None         # ba / ev initial clique, defaults to m
    b: float = 1.5                # ev only
    epsilon: float = 0.99         # ev only
    beta: float = 2.0
    c_min: int = 10
    c_max: int | None = None      # defaults to n // 8
    mu_values: tuple[float, ...] = DEFAULT_MU_VALUES
    replicates: int = 25
    base_seed: int = 1
    algorithms: tuple[str, ...] = ALGORITHMS
    tolerance: float = 0.05
    max_sweeps: int = 200
    out: str = "sweep_out"
    workers: int = 1

    def validate(self) -> "SweepConfig":
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.n < 3:
            raise ConfigError("n must be at least 3")
        if not self.mu_values:
            raise ConfigError("mu_values must not be empty")
        for mu in self.mu_values:
            if not 0.0 < mu < 1.0:
                raise ConfigError(f"mu values must lie in (0, 1), got {mu}")
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {alg!r}; choose from {ALGORITHMS}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        return self


_FIELD_TYPES = {f.name: f for f in fields(SweepConfig)}


def _coerce(name: str, value):
    if name in ("mu_values",):
        if isinstance(value, str):
            value = [part for part in value.split(",") if part.strip()]
        return tuple(float(x) for x in value)
    if name in ("algorithms",):
        if isinstance(value, str):
            value = [part.strip() for part in value.split(",") if part.strip()]
        return tuple(str(x) for x in value)
    if name in ("n", "k_max", "m", "c_min", "replicates", "base_seed",
                "max_sweeps", "workers"):
        return int(value)
    if name in ("m0", "c_max"):
        return None if value is None else int(value)
    if name in ("gamma", "avg_k", "b", "epsilon", "beta", "tolerance"):
        return float(value)
    if name in ("model", "out"):
        return str(value)
    raise ConfigError(f"unknown configuration key {name!r}")


def load_config(path=None, overrides: dict | None = None) -> SweepConfig:
    """Defaults, then JSON file entries, then explicit overrides."""
    cfg = SweepConfig()
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a flat JSON object")
        cfg = replace(cfg, **{k: _coerce(k, v) for k, v in doc.items()})
    if overrides:
        cfg = replace(cfg, **{k: _coerce(k, v) for k, v in overrides.items() if v is not None})
    return cfg.validate()


def config_to_json(cfg: SweepConfig) -> str:
    doc = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    doc["mu_values"] = list(doc["mu_values"])
    doc["algorithms"] = list(doc["algorithms"])
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
