"""
Configuration - environment overrides and the CLI config file

Precedence for CLI settings: command-line flags > config file > defaults.
The config file is TOML with flat `key = value` pairs, optionally inside an
`[erk]` table:

    bits = true
    seed = 7
    out_dir = "figures"
    max_terms = 400
"""

import os
import tomllib
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from erasure_rate_kit.exceptions import ParameterError
from erasure_rate_kit.models import McConfig, SeriesConfig

ENV_DENSE_CAP = "ERK_DENSE_CAP"
ENV_TOLERANCE_SCALE = "ERK_VALIDATE_TOLERANCE_SCALE"
DEFAULT_DENSE_CAP = 4096


def get_dense_cap() -> int:
    """Dense-matrix row cap, overridable via ERK_DENSE_CAP."""
    raw = os.environ.get(ENV_DENSE_CAP)
    if raw is None or raw.strip() == "":
        return DEFAULT_DENSE_CAP
    try:
        cap = int(raw)
    except ValueError as e:
        raise ParameterError(f"{ENV_DENSE_CAP} must be an integer, got {raw!r}") from e
    if cap < 1:
        raise ParameterError(f"{ENV_DENSE_CAP} must be positive, got {cap}")
    return cap


def get_tolerance_scale() -> float:
    """Multiplier applied to every validation tolerance."""
    raw = os.environ.get(ENV_TOLERANCE_SCALE)
    if raw is None or raw.strip() == "":
        return 1.0
    try:
        return float(raw)
    except ValueError as e:
        raise ParameterError(
            f"{ENV_TOLERANCE_SCALE} must be a number, got {raw!r}"
        ) from e


class CliConfig(BaseModel):
    """Settings shared by all CLI subcommands"""

    bits: bool = False
    snr_linear: bool = False
    seed: int = Field(default=0, ge=0, lt=2**64)
    out_dir: Path = Path(".")
    max_terms: int = Field(default=200, ge=1)
    target_tail_bound: float = Field(default=1e-12, ge=0.0)
    block_size: int = Field(default=200, ge=1)
    trials: int = Field(default=50, ge=1)
    workers: int = Field(default=1, ge=1)

    model_config = ConfigDict(extra="forbid")

    def series(self) -> SeriesConfig:
        return SeriesConfig(
            max_terms=self.max_terms, target_tail_bound=self.target_tail_bound
        )

    def mc(self) -> McConfig:
        return McConfig(
            block_size=self.block_size,
            trials=self.trials,
            seed=self.seed,
            workers=self.workers,
        )


def load_config_file(path: Path) -> dict[str, Any]:
    """
    Read a TOML config file.

    Raises:
        OSError: If the file cannot be read
        ParameterError: If the file is not valid TOML
    """
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ParameterError(f"invalid config file {path}: {e}") from e
    table = data.get("erk", data)
    if not isinstance(table, dict):
        raise ParameterError(f"config file {path}: [erk] must be a table")
    return dict(table)


def resolve_config(path: Path | None, overrides: dict[str, Any]) -> CliConfig:
    """Merge defaults, the config file, and non-None command-line values."""
    values: dict[str, Any] = load_config_file(path) if path is not None else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return CliConfig.model_validate(values)
