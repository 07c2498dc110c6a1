"""Wasserstein adversarial training with the resolution-scaled gradient penalty.

One iteration = n_d discriminator updates then n_g generator updates, each
on m fresh samples. The discriminator ascends E[d(real)] - E[d(fake)] while
a soft penalty drives the Euclidean norm of its input gradient toward
1/sqrt(m1*m2) -- the grid representation of a unit-norm Frechet derivative
under the Lebesgue measure, which is what makes the penalty target
resolution-consistent.

All randomness (minibatch order, input-field draws, mixture weights) is
keyed by seed and update counter, so runs are reproducible and resuming
from a checkpoint continues bit-for-bit.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np
import torch

from .data import DatasetSpec, realize_dataset
from .errors import ConfigurationError, TrainingDivergedError
from .grf import GRFSpec, sample_grf
from .grid import FieldBatch, Grid2D
from .models import build_discriminator, build_generator
from .rng import SeededRng, derive_seed

CHECKPOINT_VERSION = 1
LOSS_HEADER = ("iter", "phase", "w_term", "penalty", "g_loss")

_DTYPES = {"float32": torch.float32, "float64": torch.float64}


@dataclass(frozen=True)
class TrainConfig:
    data: DatasetSpec
    input_grf: GRFSpec
    grid: Grid2D
    iterations: int
    preset: str = "small"
    n_d: int = 5
    n_g: int = 1
    batch_size: int = 16
    lambda_gp: float = 10.0
    lr: float = 1e-4
    betas: tuple[float, float] = (0.5, 0.9)
    seed: int = 0
    dtype: str = "float32"
    layers: int | None = None
    codim: int | None = None
    disc_codim: int | None = None
    modes: int | None = None
    checkpoint_every: int = 500
    out_dir: str | None = None

    def __post_init__(self):
        if self.iterations < 1 or self.n_d < 1 or self.n_g < 1 or self.batch_size < 1:
            raise ConfigurationError("iterations, n_d, n_g and batch_size must all be >= 1")
        if self.lambda_gp < 0:
            raise ConfigurationError("gradient-penalty weight must be nonnegative")
        if self.dtype not in _DTYPES:
            raise ConfigurationError(f"dtype must be one of {sorted(_DTYPES)}")

    def torch_dtype(self) -> torch.dtype:
        return _DTYPES[self.dtype]


def config_from_dict(d: dict) -> TrainConfig:
    """Rebuild a TrainConfig from the plain dict stored in checkpoints."""
    d = dict(d)
    ds = dict(d.pop("data"))
    if ds.get("grid") is not None:
        ds["grid"] = Grid2D(**ds["grid"])
    if ds.get("grf") is not None:
        ds["grf"] = GRFSpec(**ds["grf"])
    d["data"] = DatasetSpec(**ds)
    d["input_grf"] = GRFSpec(**d.pop("input_grf"))
    d["grid"] = Grid2D(**d.pop("grid"))
    d["betas"] = tuple(d.pop("betas"))
    return TrainConfig(**d)


def config_hash(config: TrainConfig) -> str:
    """Hash of every field that shapes the training trajectory.

    The iteration budget, checkpoint cadence and output directory are
    excluded: randomness is keyed by update counters, so extending or
    relocating a run leaves the shared prefix of updates identical.
    """
    d = asdict(config)
    d.pop("out_dir")
    d.pop("checkpoint_every")
    d.pop("iterations")
    blob = json.dumps(d, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass
class TrainState:
    config: TrainConfig
    generator: torch.nn.Module
    discriminator: torch.nn.Module
    opt_g: torch.optim.Optimizer
    opt_d: torch.optim.Optimizer
    iteration: int = 0
    d_updates: int = 0
    g_updates: int = 0
    history: list = field(default_factory=list)


def penalty_target(m1: int, m2: int) -> float:
    """Target input-gradient norm 1/sqrt(m1*m2) on an m1 x m2 grid."""
    return 1.0 / math.sqrt(m1 * m2)


def mix_functions(u_real: torch.Tensor, u_fake: torch.Tensor, gamma) -> torch.Tensor:
    """Per-sample convex combination gamma*fake + (1-gamma)*real."""
    if u_real.shape != u_fake.shape:
        raise ConfigurationError(f"shape mismatch {tuple(u_real.shape)} vs {tuple(u_fake.shape)}")
    g = torch.as_tensor(gamma, dtype=u_real.dtype, device=u_real.device)
    if g.ndim == 1:
        g = g.view(-1, 1, 1, 1)
    return g * u_fake + (1.0 - g) * u_real


def gradient_penalty(d, u_mix: torch.Tensor, create_graph: bool = True) -> torch.Tensor:
    """Per-sample ( ||grad_u d(u)||_2 - 1/sqrt(m1*m2) )^2 at u = u_mix.

    With create_graph=True (the default) the result supports the second
    backward pass used by the discriminator update.
    """
    u = u_mix.detach().requires_grad_(True)
    r = d(u)
    (grad,) = torch.autograd.grad(r.sum(), u, create_graph=create_graph)
    norms = grad.flatten(1).norm(dim=1)
    return (norms - penalty_target(u.shape[1], u.shape[2])) ** 2


def discriminator_step(d, g, opt_d, u_real: torch.Tensor, a: torch.Tensor,
                       lambda_gp: float, gammas) -> tuple[float, float]:
    """One optimizer step on theta_d; returns (w_term, penalty_term).

    Ascends w_term = mean d(real) - mean d(fake) and descends
    lambda * penalty, with the generator frozen.
    """
    with torch.no_grad():
        u_fake = g(a)
    w_term = d(u_real).mean() - d(u_fake).mean()
    p_term = gradient_penalty(d, mix_functions(u_real, u_fake, gammas)).mean()
    loss = -w_term + lambda_gp * p_term
    opt_d.zero_grad(set_to_none=True)
    loss.backward()
    opt_d.step()
    return float(w_term.detach()), float(p_term.detach())


def generator_step(g, d, opt_g, a: torch.Tensor) -> float:
    """One optimizer step on theta_G minimizing -mean d(G(a)); returns the loss."""
    loss = -d(g(a)).mean()
    opt_g.zero_grad(set_to_none=True)
    loss.backward()
    opt_g.step()
    return float(loss.detach())


def _input_batch(config: TrainConfig, rng: SeededRng, dtype) -> torch.Tensor:
    batch = sample_grf(config.input_grf, config.grid, config.batch_size, rng)
    return torch.as_tensor(batch.values, dtype=dtype)


def build_models(config: TrainConfig):
    dtype = config.torch_dtype()
    overrides = {}
    if config.layers:
        overrides["n_layers"] = config.layers
    if config.modes:
        overrides["modes"] = config.modes
    gen = build_generator(config.preset, seed=derive_seed(config.seed, "init_g"),
                          dtype=dtype, codim=config.codim, **overrides)
    disc = build_discriminator(config.preset, seed=derive_seed(config.seed, "init_d"),
                               dtype=dtype, codim=config.disc_codim, **overrides)
    return gen, disc


def _new_state(config: TrainConfig) -> TrainState:
    gen, disc = build_models(config)
    opt_g = torch.optim.Adam(gen.parameters(), lr=config.lr, betas=config.betas)
    opt_d = torch.optim.Adam(disc.parameters(), lr=config.lr, betas=config.betas)
    return TrainState(config, gen, disc, opt_g, opt_d)


def save_checkpoint(state: TrainState, path) -> None:
    payload = {
        "format_version": CHECKPOINT_VERSION,
        "config_hash": config_hash(state.config),
        "seed": state.config.seed,
        "iteration": state.iteration,
        "d_updates": state.d_updates,
        "g_updates": state.g_updates,
        "generator": state.generator.state_dict(),
        "discriminator": state.discriminator.state_dict(),
        "opt_g": state.opt_g.state_dict(),
        "opt_d": state.opt_d.state_dict(),
        "history": [tuple(row) for row in state.history],
        "config": json.loads(json.dumps(asdict(state.config), default=str)),
    }
    torch.save(payload, path)


def load_checkpoint(path) -> dict:
    payload = torch.load(path, weights_only=False)
    if payload.get("format_version") != CHECKPOINT_VERSION:
        raise ConfigurationError(
            f"{path}: checkpoint format {payload.get('format_version')} != {CHECKPOINT_VERSION}"
        )
    return payload


def restore_state(config: TrainConfig, payload: dict) -> TrainState:
    if payload["config_hash"] != config_hash(config):
        raise ConfigurationError("checkpoint was written by a different configuration (hash mismatch)")
    state = _new_state(config)
    state.generator.load_state_dict(payload["generator"])
    state.discriminator.load_state_dict(payload["discriminator"])
    state.opt_g.load_state_dict(payload["opt_g"])
    state.opt_d.load_state_dict(payload["opt_d"])
    state.iteration = payload["iteration"]
    state.d_updates = payload["d_updates"]
    state.g_updates = payload["g_updates"]
    state.history = [tuple(row) for row in payload["history"]]
    return state


def write_loss_csv(history, path) -> None:
    """UTF-8, LF-terminated CSV: one row per update, full float precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LOSS_HEADER)
        for it, phase, w, p, gl in history:
            fmt = lambda x: "" if x is None else repr(float(x))
            writer.writerow([it, phase, fmt(w), fmt(p), fmt(gl)])


def read_loss_csv(path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != LOSS_HEADER:
            raise ConfigurationError(f"{path}: unexpected loss CSV header {header}")
        parse = lambda s: None if s == "" else float(s)
        return [(int(r[0]), r[1], parse(r[2]), parse(r[3]), parse(r[4])) for r in reader]


def _checkpoint_path(out_dir, iteration: int) -> str:
    return os.path.join(out_dir, f"checkpoint_{iteration:06d}.pt")


def train(config: TrainConfig, resume=None, data: FieldBatch | None = None) -> TrainState:
    """Run Algorithm-1-style adversarial training; reproducible from (config, seed).

    `resume` continues from a checkpoint path; `data` overrides the dataset
    realization (it must live on the training grid). Non-finite losses abort
    with a TrainingDivergedError pointing at the last good checkpoint.
    """
    dtype = config.torch_dtype()
    if data is None:
        data = realize_dataset(config.data)
    if data.grid.shape() != config.grid.shape():
        raise ConfigurationError(
            f"dataset grid {data.grid.shape()} does not match training grid {config.grid.shape()}"
        )
    real_all = torch.as_tensor(data.values, dtype=dtype)
    rng = SeededRng(config.seed)

    state = restore_state(config, load_checkpoint(resume)) if resume else _new_state(config)

    out_dir = config.out_dir
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    last_good = resume if resume else None

    def snapshot(iteration):
        nonlocal last_good
        if out_dir:
            path = _checkpoint_path(out_dir, iteration)
            save_checkpoint(state, path)
            write_loss_csv(state.history, os.path.join(out_dir, "losses.csv"))
            last_good = path

    def diverged(kind, t):
        if out_dir:
            write_loss_csv(state.history, os.path.join(out_dir, "losses.csv"))
        raise TrainingDivergedError(
            f"non-finite {kind} loss at iteration {t}; last good checkpoint: {last_good}",
            checkpoint_path=last_good,
        )

    m = config.batch_size
    while state.iteration < config.iterations:
        t = state.iteration + 1
        for _ in range(config.n_d):
            k = state.d_updates
            idx = rng.stream("real", k).integers(0, len(data), size=m)
            u_real = real_all[torch.as_tensor(idx, dtype=torch.long)]
            a = _input_batch(config, rng.child("a_d", k), dtype)
            gammas = rng.stream("gamma", k).random(m)
            w, p = discriminator_step(state.discriminator, state.generator, state.opt_d,
                                      u_real, a, config.lambda_gp, gammas)
            if not (math.isfinite(w) and math.isfinite(p)):
                diverged("discriminator", t)
            state.history.append((t, "d", w, p, None))
            state.d_updates += 1
        for _ in range(config.n_g):
            k = state.g_updates
            a = _input_batch(config, rng.child("a_g", k), dtype)
            gl = generator_step(state.generator, state.discriminator, state.opt_g, a)
            if not math.isfinite(gl):
                diverged("generator", t)
            state.history.append((t, "g", None, None, gl))
            state.g_updates += 1
        state.iteration = t
        if t % config.checkpoint_every == 0 and t != config.iterations:
            snapshot(t)
    snapshot(config.iterations)
    return state
