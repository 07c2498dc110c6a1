"""Generator operator and neural-functional discriminator.

The generator pushes Gaussian-random-field draws to the data measure; the
discriminator runs an operator stack producing an intermediate function h
and collapses it to a real number with a learnable linear integral
functional r = integral kappa(x) . h(x) dx.
"""

from __future__ import annotations

import torch
import torch.nn as nn
import torch.nn.functional as F

from .errors import ConfigurationError
from .operators import PointwiseMLP, UNO2d, UNOConfig, seeded_generator

#: (n_layers, generator codim, discriminator codim, modes) per preset.
PRESETS = {
    "full": (8, 16, 8, 20),
    "small": (5, 8, 4, 10),
    "tiny": (3, 8, 4, 4),
}


def generator_config(preset: str = "full", in_channels: int = 1, out_channels: int = 1,
                     n_layers=None, codim=None, modes=None) -> UNOConfig:
    if preset not in PRESETS:
        raise ConfigurationError(f"unknown preset {preset!r}, expected one of {sorted(PRESETS)}")
    layers0, codim0, _, modes0 = PRESETS[preset]
    return UNOConfig(
        in_channels=in_channels,
        out_channels=out_channels,
        n_layers=n_layers or layers0,
        codim=codim or codim0,
        base_modes=modes or modes0,
    )


def discriminator_config(preset: str = "full", in_channels: int = 1,
                         n_layers=None, codim=None, modes=None) -> UNOConfig:
    if preset not in PRESETS:
        raise ConfigurationError(f"unknown preset {preset!r}, expected one of {sorted(PRESETS)}")
    layers0, _, codim0, modes0 = PRESETS[preset]
    codim = codim or codim0
    return UNOConfig(
        in_channels=in_channels,
        out_channels=codim,
        n_layers=n_layers or layers0,
        codim=codim,
        base_modes=modes or modes0,
    )


def grid_coordinates(m1: int, m2: int, dtype=torch.float64, device=None) -> torch.Tensor:
    """Node coordinates (m1, m2, 2) with values j/m1, k/m2 in [0, 1)."""
    x1 = torch.arange(m1, dtype=dtype, device=device) / m1
    x2 = torch.arange(m2, dtype=dtype, device=device) / m2
    g1, g2 = torch.meshgrid(x1, x2, indexing="ij")
    return torch.stack([g1, g2], dim=-1)


class Generator(nn.Module):
    """u = Q(uno_stack(P(a))), evaluable at any admissible resolution."""

    def __init__(self, config: UNOConfig, dtype=torch.float64, generator=None, with_coords: bool = False):
        super().__init__()
        self.with_coords = with_coords
        if with_coords:
            config = UNOConfig(
                in_channels=config.in_channels + 2,
                out_channels=config.out_channels,
                codim=config.codim,
                n_layers=config.n_layers,
                base_modes=config.base_modes,
                q_hidden=config.q_hidden,
            )
        self.uno = UNO2d(config, dtype=dtype, generator=generator)

    def forward(self, a: torch.Tensor) -> torch.Tensor:
        if self.with_coords:
            b, m1, m2, _ = a.shape
            xy = grid_coordinates(m1, m2, dtype=a.dtype, device=a.device)
            a = torch.cat([a, xy.expand(b, -1, -1, -1)], dim=-1)
        return self.uno(a)


class KappaNet(nn.Module):
    """Integral-functional kernel kappa(x): a 3-stage pointwise net on the coordinate.

    The coordinate is embedded with fixed cos/sin features per axis so the
    learned kernel is periodic-smooth; the quadrature of kappa.h then
    converges spectrally, keeping the functional resolution-consistent.
    """

    def __init__(self, out_channels: int, width: int = 32, dtype=torch.float64, generator=None):
        super().__init__()
        self.net = PointwiseMLP([4, width, width, out_channels], dtype=dtype, generator=generator)

    def forward(self, coords: torch.Tensor) -> torch.Tensor:
        theta = 2.0 * torch.pi * coords
        feats = torch.cat([torch.cos(theta), torch.sin(theta)], dim=-1)
        return self.net(feats)


def integral_functional(h: torch.Tensor, kappa_values: torch.Tensor) -> torch.Tensor:
    """r = sum_x <kappa(x), h(x)> / (m1*m2), one scalar per batch member."""
    if h.shape[-1] != kappa_values.shape[-1]:
        raise ConfigurationError(
            f"kappa channels {kappa_values.shape[-1]} do not match h channels {h.shape[-1]}"
        )
    m1, m2 = h.shape[1], h.shape[2]
    return torch.einsum("bxyc,xyc->b", h, kappa_values) / (m1 * m2)


class Discriminator(nn.Module):
    """Neural functional d(u) = integral kappa(x) . h(x) dx with h = operator_stack(u)."""

    def __init__(self, config: UNOConfig, kappa_width: int = 32, dtype=torch.float64, generator=None):
        super().__init__()
        self.uno = UNO2d(config, dtype=dtype, generator=generator)
        self.kappa = KappaNet(config.out_channels, width=kappa_width, dtype=dtype, generator=generator)

    def forward(self, u: torch.Tensor) -> torch.Tensor:
        h = self.uno(u)
        _, m1, m2, _ = u.shape
        coords = grid_coordinates(m1, m2, dtype=u.dtype, device=u.device)
        return integral_functional(h, self.kappa(coords))


def input_gradient(d, u: torch.Tensor, create_graph: bool = False) -> torch.Tensor:
    """Gradient of the scalar functional at each grid value, shape like u.

    With create_graph=True the result supports a second backward pass, as
    the gradient-penalty parameter update requires.
    """
    if not u.requires_grad:
        u = u.detach().requires_grad_(True)
    r = d(u)
    (g,) = torch.autograd.grad(r.sum(), u, create_graph=create_graph)
    return g


def build_generator(preset: str = "full", seed: int = 0, dtype=torch.float64,
                    in_channels: int = 1, out_channels: int = 1, **overrides) -> Generator:
    cfg = generator_config(preset, in_channels, out_channels, **overrides)
    return Generator(cfg, dtype=dtype, generator=seeded_generator(seed))


def build_discriminator(preset: str = "full", seed: int = 0, dtype=torch.float64,
                        in_channels: int = 1, **overrides) -> Discriminator:
    cfg = discriminator_config(preset, in_channels, **overrides)
    width = max(16, 4 * cfg.out_channels)
    return Discriminator(cfg, kappa_width=width, dtype=dtype, generator=seeded_generator(seed))


def field_function(module: nn.Module):
    """Wrap an operator module as a numpy FieldBatch -> FieldBatch map (no grad)."""
    from .grid import FieldBatch

    dtype = next(module.parameters()).dtype

    def fn(batch: FieldBatch) -> FieldBatch:
        with torch.no_grad():
            out = module(torch.as_tensor(batch.values, dtype=dtype))
        return FieldBatch(batch.grid, out.to(torch.float64).numpy())

    return fn
