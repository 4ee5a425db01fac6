"""Experiment configuration: INI-style files with strict key checking.

Unknown sections or keys are validation errors, so a typo cannot silently
fall back to a default.  Grids accept either comma-separated values or a
``lo:hi:count`` linspace shorthand.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields

import numpy as np

EXPERIMENTS = ("example1", "example2", "fig1", "roc", "bound", "auc", "mip")

_SCHEMA = {
    "run": {
        "experiment": str,
        "master_seed": int,
        "output_dir": str,
        "threads": int,
        "trials": int,
        "sims": int,
        "num_perms": int,
    },
    "model": {
        "n": int,
        "t": int,
        "sigma2": float,
        "nu2": float,
        "p": float,
        "r0": float,
    },
    "example1": {
        "a": float,
        "noise_ratio": float,
        "t_max": int,
        "beta": float,
    },
    "fig1": {
        "dim": int,
    },
    "grids": {
        "pi_grid": "grid",
        "lambda_grid": "grid",
        "theta_grid": "grid",
        "rho_grid": "grid",
        "fpr_grid": "grid",
        "t_grid": "grid",
    },
}

_FIELD_BY_KEY = {("model", "t"): "T"}


class ConfigError(ValueError):
    """Invalid experiment configuration; carries the full error list."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


def _default_pi_grid() -> tuple[float, ...]:
    return tuple(np.linspace(0.025, 0.975, 21))


def _default_lambda_grid() -> tuple[float, ...]:
    return (0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.6, 0.8)


def _default_theta_grid() -> tuple[float, ...]:
    return (0.01, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.7)


def _default_rho_grid() -> tuple[float, ...]:
    return tuple(np.linspace(0.05, 0.95, 19))


def _default_fpr_grid() -> tuple[float, ...]:
    return tuple(np.linspace(0.0, 1.0, 201))


def _default_t_grid() -> tuple[float, ...]:
    return (1, 2, 3, 4, 5, 6, 8, 10, 12)


@dataclass
class ExperimentConfig:
    """Everything an experiment run needs, seed included."""

    experiment: str
    master_seed: int
    output_dir: str = "."
    threads: int = 1
    trials: int = 2000
    sims: int = 100
    num_perms: int = 100
    n: int = 10
    T: int = 20
    sigma2: float = 1.0
    nu2: float = 0.0
    p: float = 0.2
    r0: float = 0.5
    a: float = 1.0
    noise_ratio: float = 0.0
    t_max: int = 10
    beta: float = 0.5
    dim: int = 10
    pi_grid: tuple = field(default_factory=_default_pi_grid)
    lambda_grid: tuple = field(default_factory=_default_lambda_grid)
    theta_grid: tuple = field(default_factory=_default_theta_grid)
    rho_grid: tuple = field(default_factory=_default_rho_grid)
    fpr_grid: tuple = field(default_factory=_default_fpr_grid)
    t_grid: tuple = field(default_factory=_default_t_grid)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = [float(v) for v in value]
            out[f.name] = value
        return out


def _parse_grid(text: str):
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid shorthand must be lo:hi:count, got {text!r}")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError(f"grid count must be >= 1, got {count}")
        return tuple(np.linspace(lo, hi, count))
    values = tuple(float(v) for v in text.split(",") if v.strip())
    if not values:
        raise ValueError(f"empty grid {text!r}")
    return values


def parse_config_file(path: str, experiment: str | None = None) -> "ExperimentConfig":
    """Parse and validate a config file; raise ConfigError on any problem."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    errors: list[str] = []
    if not read:
        raise ConfigError([f"cannot read config file {path!r}"])
    values: dict = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            errors.append(f"unknown section [{section}]")
            continue
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                errors.append(f"unknown key {section}.{key}")
                continue
            kind = _SCHEMA[section][key]
            name = _FIELD_BY_KEY.get((section, key), key)
            try:
                if kind == "grid":
                    values[name] = _parse_grid(raw)
                elif kind is int:
                    values[name] = int(raw)
                elif kind is float:
                    values[name] = float(raw)
                else:
                    values[name] = raw.strip()
            except ValueError as exc:
                errors.append(f"{section}.{key}: {exc}")
    if experiment is not None:
        stated = values.get("experiment")
        if stated is not None and stated != experiment:
            errors.append(
                f"run.experiment={stated!r} conflicts with requested {experiment!r}"
            )
        values["experiment"] = experiment
    if "experiment" not in values:
        errors.append("run.experiment is required (or pass the experiment name)")
    if "master_seed" not in values:
        errors.append("run.master_seed is required")
    if errors:
        raise ConfigError(errors)
    config = ExperimentConfig(**values)
    errors = validate(config)
    if errors:
        raise ConfigError(errors)
    return config


def validate(config: ExperimentConfig) -> list[str]:
    """Structural and range checks; touches no RNG. Empty list means valid."""
    errors: list[str] = []

    def check(cond: bool, message: str) -> None:
        if not cond:
            errors.append(message)

    check(config.experiment in EXPERIMENTS,
          f"experiment: must be one of {', '.join(EXPERIMENTS)}, got {config.experiment!r}")
    check(isinstance(config.master_seed, int) and config.master_seed >= 0,
          f"master_seed: must be a nonnegative integer, got {config.master_seed!r}")
    check(config.threads >= 1, f"threads: must be >= 1, got {config.threads}")
    check(config.n >= 1, f"model.n: must be >= 1, got {config.n}")
    check(config.T >= 0, f"model.t: must be >= 0, got {config.T}")
    check(config.sigma2 > 0, f"model.sigma2: must be > 0, got {config.sigma2}")
    check(config.nu2 >= 0, f"model.nu2: must be >= 0, got {config.nu2}")
    check(0.0 <= config.p <= 1.0, f"model.p: must be in [0, 1], got {config.p}")
    check(0.0 < config.r0 < 1.0, f"model.r0: must be in (0, 1), got {config.r0}")
    check(config.trials >= 2, f"run.trials: must be >= 2, got {config.trials}")
    check(config.sims >= 1, f"run.sims: must be >= 1, got {config.sims}")
    check(config.num_perms >= 20, f"run.num_perms: must be >= 20, got {config.num_perms}")

    if config.experiment == "example1":
        check(config.a != 0, "example1.a: must be nonzero")
        check(config.noise_ratio >= 0,
              f"example1.noise_ratio: must be >= 0, got {config.noise_ratio}")
        check(config.t_max >= 0, f"example1.t_max: must be >= 0, got {config.t_max}")
        check(0.0 < config.beta < 1.0,
              f"example1.beta: must be in (0, 1), got {config.beta}")
    if config.experiment == "fig1":
        check(config.dim >= 2, f"fig1.dim: must be >= 2, got {config.dim}")
    if config.experiment in ("roc", "bound"):
        check(len(config.pi_grid) > 0, "grids.pi_grid: must be nonempty")
        check(all(0.0 < v < 1.0 for v in config.pi_grid),
              "grids.pi_grid: values must lie in (0, 1)")
        check(len(config.fpr_grid) > 0, "grids.fpr_grid: must be nonempty")
    if config.experiment == "roc":
        check(len(config.lambda_grid) > 0, "grids.lambda_grid: must be nonempty")
        check(all(v >= 0 for v in config.lambda_grid),
              "grids.lambda_grid: values must be >= 0")
        check(len(config.theta_grid) > 0, "grids.theta_grid: must be nonempty")
        check(all(0.0 < v < 1.0 for v in config.theta_grid),
              "grids.theta_grid: values must lie in (0, 1)")
    if config.experiment == "auc":
        check(len(config.rho_grid) > 0, "grids.rho_grid: must be nonempty")
        check(all(0.0 <= v <= 1.0 for v in config.rho_grid),
              "grids.rho_grid: values must lie in [0, 1]")
        check(len(config.fpr_grid) > 0, "grids.fpr_grid: must be nonempty")
    if config.experiment == "mip":
        check(len(config.t_grid) > 0, "grids.t_grid: must be nonempty")
        check(all(float(v).is_integer() and v >= 1 for v in config.t_grid),
              "grids.t_grid: values must be integers >= 1")
    return errors
