"""Uniform periodic grids on [0,1]^2 and functions sampled on them.

Conventions used throughout the package:

* an ``m1 x m2`` grid has nodes ``x[j,k] = (j/m1, k/m2)`` -- the periodic
  convention without a duplicated endpoint, so FFT modes are exact basis
  functions of the grid;
* every node carries the Lebesgue quadrature weight ``1/(m1*m2)``;
* function values are stored channels-last, shape ``(m1, m2, c)`` for a
  single function and ``(n, m1, m2, c)`` for a batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InvalidInputError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic grid on the unit square."""

    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 < 2 or self.m2 < 2:
            raise ConfigurationError(f"grid needs at least 2 points per axis, got {self.m1}x{self.m2}")

    @property
    def n_nodes(self) -> int:
        return self.m1 * self.m2

    @property
    def weight(self) -> float:
        """Quadrature weight per node (Lebesgue measure of one cell)."""
        return 1.0 / (self.m1 * self.m2)

    def coords(self) -> np.ndarray:
        """Node coordinates, shape (m1, m2, 2), values in [0, 1)."""
        x1 = np.arange(self.m1) / self.m1
        x2 = np.arange(self.m2) / self.m2
        g1, g2 = np.meshgrid(x1, x2, indexing="ij")
        return np.stack([g1, g2], axis=-1)

    def shape(self) -> tuple[int, int]:
        return (self.m1, self.m2)


@dataclass(frozen=True)
class GridFunction:
    """A real vector-valued function sampled on a Grid2D, shape (m1, m2, c)."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim == 2:
            v = v[:, :, None]
        if v.ndim != 3 or v.shape[:2] != (self.grid.m1, self.grid.m2):
            raise InvalidInputError(
                f"values shape {np.shape(self.values)} does not match grid {self.grid.m1}x{self.grid.m2}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("function values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def channels(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class FieldBatch:
    """A batch of functions on a shared grid, shape (n, m1, m2, c)."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim == 3:
            v = v[:, :, :, None]
        if v.ndim != 4 or v.shape[1:3] != (self.grid.m1, self.grid.m2):
            raise InvalidInputError(
                f"batch shape {np.shape(self.values)} does not match grid {self.grid.m1}x{self.grid.m2}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("function values must be finite")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def channels(self) -> int:
        return self.values.shape[3]

    def __getitem__(self, i: int) -> GridFunction:
        return GridFunction(self.grid, self.values[i])


@dataclass(frozen=True)
class AngularField(GridFunction):
    """Single-channel function whose values follow the (-pi, pi] convention."""

    def __post_init__(self):
        super().__post_init__()
        if self.channels != 1:
            raise InvalidInputError("angular fields are single-channel")
        v = self.values
        if not (np.all(v > -np.pi) and np.all(v <= np.pi)):
            raise InvalidInputError("angular values must lie in (-pi, pi]")


def l2_norm(f: GridFunction | FieldBatch) -> float | np.ndarray:
    """Quadrature L2 norm sqrt( sum f^2 / (m1*m2) ).

    For a batch, returns one norm per member.
    """
    v = f.values
    if isinstance(f, FieldBatch):
        sq = np.sum(v * v, axis=(1, 2, 3))
    else:
        sq = np.sum(v * v)
    return np.sqrt(sq * f.grid.weight)


def _resize_axis(spec: np.ndarray, axis: int, m_new: int) -> np.ndarray:
    """Resize one axis of a full FFT spectrum to m_new frequencies.

    Frequencies outside the target band are dropped; the even-grid Nyquist
    line is split in half when upsampling and the +/-Nyquist pair is folded
    back together when downsampling, so that up-then-down is the identity.
    """
    m_old = spec.shape[axis]
    if m_new == m_old:
        return spec

    def take(src_freqs):
        idx = np.asarray(src_freqs) % m_old
        return np.take(spec, idx, axis=axis)

    out_shape = list(spec.shape)
    out_shape[axis] = m_new
    out = np.zeros(out_shape, dtype=spec.dtype)

    n_keep = min(m_old, m_new)
    # strictly-inside band: |k| <= (n_keep - 1) // 2
    half = (n_keep - 1) // 2
    pos = list(range(half + 1))
    neg = list(range(-half, 0))

    def put(dst_freqs, block):
        idx = np.asarray(dst_freqs) % m_new
        sl = [slice(None)] * spec.ndim
        sl[axis] = idx
        out[tuple(sl)] = block

    put(pos, take(pos))
    if neg:
        put(neg, take(neg))

    if n_keep % 2 == 0:
        ny = n_keep // 2
        if m_new > m_old:
            # upsample: split the source Nyquist line across +ny and -ny
            line = take([-ny])
            put([ny], 0.5 * line)
            put([-ny], 0.5 * line)
        else:
            # downsample: fold source +ny and -ny onto the target Nyquist
            put([-ny], take([ny]) + take([-ny]))
    return out


def resample(f: GridFunction | FieldBatch, target: Grid2D) -> GridFunction | FieldBatch:
    """Spectral resampling onto another uniform grid.

    Forward FFT, move the mode set to the target band (zero-pad to upsample,
    truncate to downsample), inverse FFT, with the normalization that keeps
    pointwise values of band-limited inputs exactly.
    """
    batched = isinstance(f, FieldBatch)
    src = f.grid
    if src.shape() == target.shape():
        return f
    v = f.values
    ax = (1, 2) if batched else (0, 1)
    spec = np.fft.fft2(v, axes=ax) / (src.m1 * src.m2)
    spec = _resize_axis(spec, ax[0], target.m1)
    spec = _resize_axis(spec, ax[1], target.m2)
    out = np.fft.ifft2(spec, axes=ax) * (target.m1 * target.m2)
    out = np.real(out)
    cls = FieldBatch if batched else GridFunction
    return cls(target, out)


def wrap_phase(f: GridFunction | FieldBatch) -> GridFunction | FieldBatch:
    """Wrap single-channel values into (-pi, pi], mapping the -pi boundary to +pi."""
    if f.channels != 1:
        raise InvalidInputError(f"phase wrapping expects a single channel, got {f.channels}")
    v = f.values
    w = v - TWO_PI * np.round(v / TWO_PI)
    w = np.where(w <= -np.pi, w + TWO_PI, w)
    cls = FieldBatch if isinstance(f, FieldBatch) else AngularField
    return cls(f.grid, w)


def is_angular(f: GridFunction | FieldBatch) -> bool:
    """True when values already satisfy the (-pi, pi] convention."""
    v = f.values
    return f.channels == 1 and bool(np.all(v > -np.pi) and np.all(v <= np.pi))
