"""Neural-operator building blocks on periodic 2D grids (torch).

All tensors are channels-last, shape ``(batch, m1, m2, c)``. Fourier
transforms use the Riemann convention (forward normalized by 1/(m1*m2)),
so retained-mode coefficients -- and therefore all spectral weights --
mean the same thing at every grid resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import torch
import torch.nn as nn
import torch.nn.functional as F

from .errors import ConfigurationError


def seeded_generator(seed: int) -> torch.Generator:
    g = torch.Generator()
    g.manual_seed(int(seed) & 0x7FFFFFFFFFFFFFFF)
    return g


def _complex_dtype(dtype: torch.dtype) -> torch.dtype:
    return torch.complex64 if dtype == torch.float32 else torch.complex128


def _resize_axis(x: torch.Tensor, axis: int, m_new: int) -> torch.Tensor:
    """Resize one full-FFT-layout axis to m_new frequencies (split/fold Nyquist)."""
    m_old = x.shape[axis]
    if m_new == m_old:
        return x
    x = torch.moveaxis(x, axis, 0)
    if m_new > m_old:
        pad = list(x.shape)
        if m_old % 2 == 0:
            ny = m_old // 2
            pad[0] = m_new - m_old - 1
            pieces = [x[:ny], 0.5 * x[ny : ny + 1], x.new_zeros(pad), 0.5 * x[ny : ny + 1], x[ny + 1 :]]
        else:
            h = (m_old - 1) // 2
            pad[0] = m_new - m_old
            pieces = [x[: h + 1], x.new_zeros(pad), x[h + 1 :]]
    else:
        if m_new % 2 == 0:
            ny = m_new // 2
            fold = x[ny : ny + 1] + x[m_old - ny : m_old - ny + 1]
            pieces = [x[:ny], fold, x[m_old - ny + 1 :]]
        else:
            h = (m_new - 1) // 2
            pieces = [x[: h + 1], x[m_old - h :]]
    return torch.moveaxis(torch.cat(pieces, dim=0), 0, axis)


def _flip_k1(x: torch.Tensor) -> torch.Tensor:
    """x[k1] -> x[-k1 mod m1] along dim 1 (full FFT layout)."""
    return torch.roll(x.flip(1), 1, dims=1)


def _resize_rfft_axis2(x: torch.Tensor, m_old: int, m_new: int) -> torch.Tensor:
    """Resize the half-spectrum axis (dim 2 of (b, m1, h, c)) to m_new frequencies.

    Relies on the Hermitian symmetry X[k1, -k2] = conj(X[-k1, k2]) of
    real-field spectra for the Nyquist fold.
    """
    if m_new == m_old:
        return x
    h_new = m_new // 2 + 1
    if m_new > m_old:
        pad = list(x.shape)
        if m_old % 2 == 0:
            ny = m_old // 2
            pad[2] = h_new - ny - 1
            pieces = [x[:, :, :ny], 0.5 * x[:, :, ny : ny + 1], x.new_zeros(pad)]
        else:
            pad[2] = h_new - x.shape[2]
            pieces = [x, x.new_zeros(pad)]
    else:
        if m_new % 2 == 0:
            ny = m_new // 2
            plus = x[:, :, ny : ny + 1]
            pieces = [x[:, :, :ny], plus + _flip_k1(plus).conj()]
        else:
            pieces = [x[:, :, : h_new]]
    return torch.cat(pieces, dim=2)


def spectral_resample(v: torch.Tensor, m1: int, m2: int) -> torch.Tensor:
    """Differentiable spectral resampling of (b, m1, m2, c) onto an (m1, m2) grid.

    Same convention as :func:`gano.grid.resample`: exact on band-limited
    inputs, Nyquist lines split on the way up and folded on the way down.
    """
    m1_old, m2_old = v.shape[1], v.shape[2]
    if (m1_old, m2_old) == (m1, m2):
        return v
    spec = torch.fft.rfft2(v, dim=(1, 2), norm="forward")
    spec = _resize_axis(spec, 1, m1)
    spec = _resize_rfft_axis2(spec, m2_old, m2)
    return torch.fft.irfft2(spec, s=(m1, m2), dim=(1, 2), norm="forward")


def _check_modes(m1: int, m2: int, modes1: int, modes2: int):
    if modes1 > m1 // 2 or modes2 > m2 // 2:
        raise ConfigurationError(
            f"mode cutoff ({modes1},{modes2}) exceeds Nyquist of a {m1}x{m2} grid"
        )


def hermitianized_weights(weights: torch.Tensor, modes1: int) -> torch.Tensor:
    """Project the k2=0 column onto Hermitian symmetry across +-k1.

    Row r of the weight array holds wavenumber k1 = r for r < modes1 and
    k1 = r - (2*modes1 - 1) otherwise; flipping rows 1: maps k1 -> -k1.
    """
    col = weights[:, :1]
    flipped = torch.cat([col[:1], col[1:].flip(0)], dim=0)
    herm = 0.5 * (col + flipped.conj())
    return torch.cat([herm, weights[:, 1:]], dim=1)


def spectral_conv(v: torch.Tensor, weights: torch.Tensor, modes1: int, modes2: int) -> torch.Tensor:
    """Mode-wise matrix multiply in Fourier space, zero outside the mode box.

    `weights` is complex with shape (2*modes1-1, modes2, c_in, c_out); the
    retained box is |k1| < modes1, |k2| < modes2 with Hermitian symmetry
    supplying the negative-k2 half, so real input yields real output.
    """
    b, m1, m2, c_in = v.shape
    _check_modes(m1, m2, modes1, modes2)
    if weights.shape[:2] != (2 * modes1 - 1, modes2) or weights.shape[2] != c_in:
        raise ConfigurationError(
            f"weight shape {tuple(weights.shape)} does not match modes ({modes1},{modes2}), c_in {c_in}"
        )
    c_out = weights.shape[3]
    w = hermitianized_weights(weights, modes1)
    vf = torch.fft.rfft2(v, dim=(1, 2), norm="forward")
    out = vf.new_zeros((b, m1, m2 // 2 + 1, c_out))
    out[:, :modes1, :modes2] = torch.einsum("bxyi,xyio->bxyo", vf[:, :modes1, :modes2], w[:modes1])
    if modes1 > 1:
        out[:, m1 - modes1 + 1 :, :modes2] = torch.einsum(
            "bxyi,xyio->bxyo", vf[:, m1 - modes1 + 1 :, :modes2], w[modes1:]
        )
    return torch.fft.irfft2(out, s=(m1, m2), dim=(1, 2), norm="forward")


class SpectralConv2d(nn.Module):
    """Learnable Fourier integral kernel, truncated at (modes1, modes2)."""

    def __init__(self, in_channels, out_channels, modes1, modes2, dtype=torch.float64, generator=None):
        super().__init__()
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.modes1 = modes1
        self.modes2 = modes2
        scale = 1.0 / (in_channels * modes1 * modes2)
        shape = (2 * modes1 - 1, modes2, in_channels, out_channels)
        re = torch.randn(shape, dtype=dtype, generator=generator)
        im = torch.randn(shape, dtype=dtype, generator=generator)
        self.weights = nn.Parameter(((re + 1j * im) * (scale / math.sqrt(2.0))).to(_complex_dtype(dtype)))

    def forward(self, v):
        return spectral_conv(v, self.weights, self.modes1, self.modes2)


def _init_linear(lin: nn.Linear, generator=None):
    # variance 2/fan_in, zero bias
    std = math.sqrt(2.0 / lin.in_features)
    with torch.no_grad():
        lin.weight.copy_(torch.randn(lin.weight.shape, dtype=lin.weight.dtype, generator=generator) * std)
        if lin.bias is not None:
            lin.bias.zero_()


class FourierLayer2d(nn.Module):
    """activation( spectral_conv(v) + W v + b ) with W, b acting pointwise."""

    def __init__(self, in_channels, out_channels, modes1, modes2, activation=F.gelu,
                 dtype=torch.float64, generator=None):
        super().__init__()
        self.spectral = SpectralConv2d(in_channels, out_channels, modes1, modes2, dtype, generator)
        self.w = nn.Linear(in_channels, out_channels, dtype=dtype)
        _init_linear(self.w, generator)
        self.activation = activation

    def forward(self, v):
        out = self.spectral(v) + self.w(v)
        return self.activation(out) if self.activation is not None else out


class PointwiseMLP(nn.Module):
    """The same small fully-connected net applied independently at every node."""

    def __init__(self, dims, activation=F.gelu, final_activation=False,
                 dtype=torch.float64, generator=None):
        super().__init__()
        if len(dims) < 2:
            raise ConfigurationError("pointwise net needs at least input and output dims")
        self.linears = nn.ModuleList(
            [nn.Linear(a, b, dtype=dtype) for a, b in zip(dims[:-1], dims[1:])]
        )
        for lin in self.linears:
            _init_linear(lin, generator)
        self.activation = activation
        self.final_activation = final_activation

    def forward(self, v):
        for i, lin in enumerate(self.linears):
            v = lin(v)
            if self.activation is not None and (i < len(self.linears) - 1 or self.final_activation):
                v = self.activation(v)
        return v


def _symmetric_scales(n_layers: int) -> tuple[float, ...]:
    if n_layers < 1:
        raise ConfigurationError("need at least one layer")
    down = [0.5**i for i in range((n_layers + 1) // 2)]
    up = down[: n_layers // 2][::-1]
    return tuple(down + up)


@dataclass(frozen=True)
class UNOConfig:
    """Symmetric U-shaped operator schedule.

    Domain scale contracts by factors of two and expands back; the channel
    count (co-dimension) doubles on contraction and halves on expansion;
    per-layer retained modes shrink with the grid. Skip connections
    concatenate the output of layer i onto the output of the mirror layer
    n_layers-1-i (whose grids match by symmetry) before the next block.
    """

    in_channels: int = 1
    out_channels: int = 1
    codim: int = 16
    n_layers: int = 8
    base_modes: int = 20
    q_hidden: int | None = None
    scales: tuple[float, ...] = field(default=None)

    def __post_init__(self):
        if self.scales is None:
            object.__setattr__(self, "scales", _symmetric_scales(self.n_layers))
        if len(self.scales) != self.n_layers:
            raise ConfigurationError("scale schedule length must equal n_layers")
        if tuple(reversed(self.scales)) != self.scales or self.scales[0] != 1.0 or self.scales[-1] != 1.0:
            raise ConfigurationError("scale schedule must be a symmetric U ending at full resolution")
        if self.q_hidden is None:
            object.__setattr__(self, "q_hidden", 2 * self.codim)

    def layer_channels(self) -> tuple[int, ...]:
        out = []
        prev_scale, ch = 1.0, self.codim
        for s in self.scales:
            if s < prev_scale:
                ch *= 2
            elif s > prev_scale:
                ch //= 2
            out.append(ch)
            prev_scale = s
        return tuple(out)

    def layer_modes(self) -> tuple[int, ...]:
        return tuple(max(1, math.ceil(self.base_modes * s)) for s in self.scales)

    def skip_source(self, j: int) -> int | None:
        """Index of the encoder layer concatenated into layer j's input (None if none)."""
        src = self.n_layers - j
        return src if src < j - 1 else None

    def layer_grid(self, m1: int, m2: int, j: int) -> tuple[int, int]:
        s = self.scales[j]
        g1, g2 = m1 * s, m2 * s
        if g1 != int(g1) or g2 != int(g2) or int(g1) < 2 or int(g2) < 2:
            raise ConfigurationError(
                f"grid {m1}x{m2} is not divisible down to scale {s} (layer {j})"
            )
        return int(g1), int(g2)


class UNO2d(nn.Module):
    """Lift -> U-shaped stack of Fourier layers with spectral domain scaling -> project."""

    def __init__(self, config: UNOConfig, dtype=torch.float64, generator=None):
        super().__init__()
        self.config = config
        cfg = config
        self.lift = nn.Linear(cfg.in_channels, cfg.codim, dtype=dtype)
        _init_linear(self.lift, generator)
        chans = cfg.layer_channels()
        modes = cfg.layer_modes()
        layers = []
        for j in range(cfg.n_layers):
            c_in = cfg.codim if j == 0 else chans[j - 1]
            src = cfg.skip_source(j)
            if src is not None:
                c_in += chans[src]
            layers.append(
                FourierLayer2d(c_in, chans[j], modes[j], modes[j], dtype=dtype, generator=generator)
            )
        self.layers = nn.ModuleList(layers)
        q_in = chans[-1] + chans[0]
        self.proj = PointwiseMLP([q_in, cfg.q_hidden, cfg.out_channels], dtype=dtype, generator=generator)

    def forward(self, v: torch.Tensor) -> torch.Tensor:
        cfg = self.config
        b, m1, m2, _ = v.shape
        grids = [cfg.layer_grid(m1, m2, j) for j in range(cfg.n_layers)]
        for j, modes in enumerate(cfg.layer_modes()):
            if modes > min(grids[j]) // 2:
                raise ConfigurationError(
                    f"layer {j} needs {modes} modes but its {grids[j][0]}x{grids[j][1]} grid "
                    f"only has Nyquist {min(grids[j]) // 2}"
                )
        h = self.lift(v)
        outs = []
        for j, layer in enumerate(self.layers):
            src = cfg.skip_source(j)
            if src is not None:
                h = torch.cat([h, outs[src]], dim=-1)
            h = spectral_resample(h, *grids[j])
            h = layer(h)
            outs.append(h)
        h = torch.cat([h, outs[0]], dim=-1)
        return self.proj(h)
