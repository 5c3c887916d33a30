"""Run configuration, presets and JSON config-file ingestion."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from .parser import ExprSyntaxError, parse_expr

PRESETS = ("sol3-a", "sol3-b", "sol3-lc")
OUTPUT_FORMATS = ("text", "json")

# polynomial test functions for the numeric check, ascending coefficients
DEFAULT_TEST_FUNCTIONS: Dict[str, List[float]] = {"a": [1.0, 0.0, 1.0], "b": [0.0, -1.0, 0.0, 1.0]}


class ConfigError(ValueError):
    pass


@dataclass
class NumericCheck:
    samples: int = 10
    seed: int = 0


@dataclass
class RunConfig:
    preset: str
    epsilon: int
    dimension: int
    metric_diagonal: List[str]
    p_vector: List[str]
    declared_symbols: List[str] = field(default_factory=lambda: ["a", "b"])
    output_format: str = "text"
    numeric_check: Optional[NumericCheck] = None
    zero_symbols: List[str] = field(default_factory=list)
    extra_alphas: List[str] = field(default_factory=list)
    test_functions: Dict[str, List[float]] = field(default_factory=lambda: dict(DEFAULT_TEST_FUNCTIONS))

    def validate(self) -> "RunConfig":
        if self.preset not in PRESETS + ("custom",):
            raise ConfigError(f"unknown preset {self.preset!r}")
        if self.epsilon not in (1, -1):
            raise ConfigError("epsilon must be +1 or -1")
        if self.dimension < 3:
            raise ConfigError("dimension must be at least 3")
        if len(self.metric_diagonal) != self.dimension:
            raise ConfigError("metric_diagonal length must equal dimension")
        if len(self.p_vector) != self.dimension:
            raise ConfigError("p_vector length must equal dimension")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output_format must be one of {OUTPUT_FORMATS}")
        if self.numeric_check is not None and self.numeric_check.samples < 1:
            raise ConfigError("numeric_check.samples must be positive")
        for text in list(self.metric_diagonal) + list(self.p_vector):
            try:
                parse_expr(text, self.declared_symbols)
            except ExprSyntaxError as exc:
                raise ConfigError(f"bad expression {text!r}: {exc}") from exc
        for name in self.zero_symbols:
            if name not in self.declared_symbols:
                raise ConfigError(f"zero_symbols entry {name!r} is not declared")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        return d


def preset_config(preset: str, epsilon: int, **overrides) -> RunConfig:
    if preset not in PRESETS:
        raise ConfigError(f"unknown preset {preset!r}")
    if epsilon not in (1, -1):
        raise ConfigError("epsilon must be +1 or -1")
    p = {"sol3-a": ["0", "0", "a"], "sol3-b": ["b", "0", "0"], "sol3-lc": ["0", "0", "0"]}[preset]
    cfg = RunConfig(
        preset=preset,
        epsilon=epsilon,
        dimension=3,
        metric_diagonal=["exp(2*x3)", "exp(-2*x3)", str(epsilon)],
        p_vector=p,
    )
    for key, value in overrides.items():
        if not hasattr(cfg, key):
            raise ConfigError(f"unknown config field {key!r}")
        setattr(cfg, key, value)
    return cfg.validate()


_KNOWN = {"preset", "epsilon", "dimension", "metric_diagonal", "p_vector", "declared_symbols",
          "output_format", "numeric_check", "zero_symbols", "extra_alphas", "test_functions"}


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    preset = data.get("preset", "custom")
    try:
        epsilon = int(data["epsilon"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("epsilon is required and must be +1 or -1") from None
    nc = data.get("numeric_check")
    numeric = None
    if nc:
        if not isinstance(nc, dict):
            raise ConfigError("numeric_check must be an object with samples and seed")
        numeric = NumericCheck(int(nc.get("samples", 10)), int(nc.get("seed", 0)))
    common = {k: data[k] for k in ("declared_symbols", "output_format", "zero_symbols",
                                   "extra_alphas", "test_functions") if k in data}
    if numeric is not None:
        common["numeric_check"] = numeric
    if preset in PRESETS:
        for k in ("metric_diagonal", "p_vector", "dimension"):
            if k in data:
                raise ConfigError(f"{k} cannot be set for preset {preset}")
        return preset_config(preset, epsilon, **common)
    if preset != "custom":
        raise ConfigError(f"unknown preset {preset!r}")
    for k in ("dimension", "metric_diagonal", "p_vector", "declared_symbols"):
        if k not in data:
            raise ConfigError(f"custom config requires {k!r}")
    cfg = RunConfig(preset="custom", epsilon=epsilon, dimension=int(data["dimension"]),
                    metric_diagonal=[str(x) for x in data["metric_diagonal"]],
                    p_vector=[str(x) for x in data["p_vector"]], **common)
    return cfg.validate()


def load_config(path: str | Path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(data)
