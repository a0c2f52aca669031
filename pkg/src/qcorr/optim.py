"""Optimizer configuration and run reports shared by the FEF and discord oracles."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

DEFAULT_SEED = 42
SEED_ENV_VAR = "QCORR_SEED"


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the multi-restart oracles.

    ``None`` fields are resolved by each oracle to its own default (for
    example the FEF oracle uses 20 restarts, or 40 when the second
    subsystem has dimension 9 or more).
    """

    restarts: int | None = None
    max_iterations: int | None = None
    tolerance: float | None = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.restarts is not None and self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass
class OptimizerReport:
    best_value: float
    restarts: int
    iterations: int
    converged: bool
    seed: int | None
    history: list[float] = field(default_factory=list)  # best-so-far after each restart


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw == "":
        return default
    try:
        seed = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV_VAR}={raw!r} is not an integer") from exc
    if not 0 <= seed < 2**64:
        raise ConfigError(f"{SEED_ENV_VAR} must be an unsigned 64-bit integer")
    return seed


def restart_generators(rng: np.random.Generator | None, cfg: OptimizerConfig, n: int) -> list[np.random.Generator]:
    """Independent per-restart generators, so results do not depend on run order."""
    if rng is None:
        rng = cfg.rng()
    return rng.spawn(n)
