"""INI experiment configuration: fail-closed parsing and TrainConfig assembly.

Unknown sections or keys are hard errors -- a silently ignored typo in a
hyperparameter name is the usual way reproducibility dies. The environment
variable ``GANO_SEED`` overrides the configured training seed when set.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass

from .data import DatasetSpec
from .errors import ConfigurationError
from .grf import GRFSpec
from .grid import Grid2D
from .training import TrainConfig

KNOWN_KEYS = {
    "model": {"preset", "layers", "codim", "disc_codim", "modes"},
    "grf": {"tau", "alpha", "sigma", "mean"},
    "data": {"kind", "path", "n", "resolution", "tau", "alpha", "sigma",
             "mean_a", "mean_b", "seed", "wrap"},
    "train": {"lambda", "n_d", "n_g", "m", "iterations", "lr", "beta1", "beta2",
              "seed", "dtype"},
    "output": {"directory", "checkpoint_every"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    train: TrainConfig


def _get(parser, section, key, cast, default=None, required=False):
    if not parser.has_option(section, key):
        if required:
            raise ConfigurationError(f"missing required key [{section}] {key}")
        return default
    raw = parser.get(section, key)
    try:
        if cast is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return cast(raw)
    except ValueError as ex:
        raise ConfigurationError(f"bad value for [{section}] {key}: {raw!r}") from ex


def _validate_keys(parser) -> None:
    for section in parser.sections():
        if section not in KNOWN_KEYS:
            raise ConfigurationError(f"unknown config section [{section}]")
        for key in parser.options(section):
            if key not in KNOWN_KEYS[section]:
                raise ConfigurationError(f"unknown key {key!r} in section [{section}]")


def _grf_from(parser, section, require_tau=True) -> GRFSpec:
    tau = _get(parser, section, "tau", float, required=require_tau, default=1.0)
    return GRFSpec(
        tau=tau,
        alpha=_get(parser, section, "alpha", float, default=2.0),
        sigma=_get(parser, section, "sigma", float, default=None),
        mean=_get(parser, section, "mean", float, default=0.0),
    )


def dataset_spec_from(parser, resolution=None) -> DatasetSpec:
    kind = _get(parser, "data", "kind", str, required=True)
    if kind not in ("grf", "mixture", "external"):
        raise ConfigurationError(f"unknown data kind {kind!r} (expected grf, mixture or external)")
    if kind == "external":
        return DatasetSpec(
            kind="external",
            path=_get(parser, "data", "path", str, required=True),
            wrap=_get(parser, "data", "wrap", bool, default=False),
        )
    res = resolution or _get(parser, "data", "resolution", int, required=True)
    grid = Grid2D(res, res)
    grf = _grf_from(parser, "data")
    return DatasetSpec(
        kind=kind,
        grid=grid,
        count=_get(parser, "data", "n", int, required=True),
        seed=_get(parser, "data", "seed", int, default=0),
        grf=grf,
        mean_a=_get(parser, "data", "mean_a", float, default=1.0),
        mean_b=_get(parser, "data", "mean_b", float, default=-1.0),
    )


def load_experiment_config(path) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise ConfigurationError(f"cannot read config file {path}")
    _validate_keys(parser)

    data = dataset_spec_from(parser)
    if data.kind == "external":
        from .data import load_field_file  # resolution comes from the file header

        grid = load_field_file(data.path).grid
    else:
        grid = data.grid

    input_grf = _grf_from(parser, "grf") if parser.has_section("grf") else GRFSpec(tau=1.0)

    seed = _get(parser, "train", "seed", int, default=0)
    env_seed = os.environ.get("GANO_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError as ex:
            raise ConfigurationError(f"GANO_SEED must be an integer, got {env_seed!r}") from ex

    train = TrainConfig(
        data=data,
        input_grf=input_grf,
        grid=grid,
        iterations=_get(parser, "train", "iterations", int, required=True),
        preset=_get(parser, "model", "preset", str, default="small"),
        n_d=_get(parser, "train", "n_d", int, default=5),
        n_g=_get(parser, "train", "n_g", int, default=1),
        batch_size=_get(parser, "train", "m", int, default=16),
        lambda_gp=_get(parser, "train", "lambda", float, default=10.0),
        lr=_get(parser, "train", "lr", float, default=1e-4),
        betas=(
            _get(parser, "train", "beta1", float, default=0.5),
            _get(parser, "train", "beta2", float, default=0.9),
        ),
        seed=seed,
        dtype=_get(parser, "train", "dtype", str, default="float32"),
        layers=_get(parser, "model", "layers", int, default=None),
        codim=_get(parser, "model", "codim", int, default=None),
        disc_codim=_get(parser, "model", "disc_codim", int, default=None),
        modes=_get(parser, "model", "modes", int, default=None),
        checkpoint_every=_get(parser, "output", "checkpoint_every", int, default=500),
        out_dir=_get(parser, "output", "directory", str, default=None),
    )
    return ExperimentConfig(train=train)
