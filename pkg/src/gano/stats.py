"""Evaluation statistics: pointwise histograms, periodic radial
autocorrelation, and circular moments for angle-valued fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, InvalidInputError
from .grid import FieldBatch


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray  # (n_bins + 1,), monotone
    masses: np.ndarray  # (n_bins,), sums to 1
    count: int

    def __post_init__(self):
        object.__setattr__(self, "edges", np.asarray(self.edges, dtype=np.float64))
        object.__setattr__(self, "masses", np.asarray(self.masses, dtype=np.float64))


@dataclass(frozen=True)
class RadialCurve:
    r: np.ndarray  # ascending distances, r[0] == 0
    rho: np.ndarray
    counts: np.ndarray  # displacement nodes per bin


@dataclass(frozen=True)
class CircularMoments:
    p: int
    r: float  # resultant length R_p in [0, 1]
    phi: float | None  # mean direction in (-pi, pi], None when R_p vanishes


def _pool_values(batch) -> np.ndarray:
    v = batch.values if isinstance(batch, FieldBatch) else np.asarray(batch)
    return v.reshape(-1)


def pointwise_histogram(batch, n_bins: int, value_range: tuple[float, float]) -> Histogram:
    """Pool every grid value of every member, bin, and normalize.

    Values outside the range are counted in the first/last bin.
    """
    if n_bins < 1:
        raise ConfigurationError("need at least one bin")
    lo, hi = float(value_range[0]), float(value_range[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
        raise ConfigurationError(f"bad histogram range ({lo}, {hi})")
    v = _pool_values(batch)
    if v.size == 0:
        raise InvalidInputError("empty batch")
    width = (hi - lo) / n_bins
    idx = np.clip(np.floor((v - lo) / width).astype(np.int64), 0, n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins).astype(np.float64)
    edges = lo + width * np.arange(n_bins + 1)
    return Histogram(edges=edges, masses=counts / v.size, count=int(v.size))


def histogram_w1(h1: Histogram, h2: Histogram) -> float:
    """Wasserstein-1 distance between two same-edge histograms.

    Masses are treated as point masses at the left bin edges, for which
    sum |CDF1 - CDF2| * bin_width is the exact transport cost.
    """
    if not np.array_equal(h1.edges, h2.edges):
        raise ConfigurationError("histograms must share bin edges")
    cdf_gap = np.abs(np.cumsum(h1.masses) - np.cumsum(h2.masses))
    return float(np.sum(cdf_gap * np.diff(h1.edges)))


def _periodic_distances(m1: int, m2: int) -> np.ndarray:
    d1 = np.minimum(np.arange(m1), m1 - np.arange(m1)) / m1
    d2 = np.minimum(np.arange(m2), m2 - np.arange(m2)) / m2
    return np.hypot(d1[:, None], d2[None, :])


def radial_autocorrelation(batch, n_radial_bins: int) -> RadialCurve:
    """Azimuthally averaged periodic autocorrelation, mean-removed and normalized.

    Per sample the autocovariance comes from |FFT|^2 (Wiener-Khinchin); the
    per-sample curves are variance-normalized, averaged, then binned by
    periodic node distance into `n_radial_bins` equal bins over (0, 1/2].
    Lag zero is reported separately as its own point, so rho[0] = 1.
    """
    v = batch.values if isinstance(batch, FieldBatch) else np.asarray(batch)
    if v.ndim == 4:
        if v.shape[3] != 1:
            raise InvalidInputError("autocorrelation expects single-channel fields")
        v = v[..., 0]
    if v.ndim != 3 or v.shape[0] == 0:
        raise InvalidInputError("expected a nonempty batch of 2D fields")
    if n_radial_bins < 1:
        raise ConfigurationError("need at least one radial bin")
    n, m1, m2 = v.shape
    centered = v - v.mean(axis=(1, 2), keepdims=True)
    variances = np.mean(centered**2, axis=(1, 2))
    bad = np.flatnonzero(variances <= 0)
    if bad.size:
        raise DegenerateInputError(f"sample {bad[0]} has zero variance")
    power = np.abs(np.fft.fft2(centered, axes=(1, 2))) ** 2
    # Wiener-Khinchin: ifft2(|F|^2)[d] = sum_x e(x) e(x+d); divide once more by
    # the node count so lag zero equals the per-sample variance exactly.
    acov = np.fft.ifft2(power, axes=(1, 2)).real / (m1 * m2)
    rho_grid = np.mean(acov / variances[:, None, None], axis=0)

    dist = _periodic_distances(m1, m2)
    width = 0.5 / n_radial_bins
    r_out = [0.0]
    rho_out = [float(rho_grid[0, 0])]
    counts = [1]
    flat_d = dist.ravel()
    flat_rho = rho_grid.ravel()
    positive = flat_d > 0
    keep = positive & (flat_d <= 0.5 + 1e-12)
    bins = np.minimum(np.ceil(flat_d[keep] / width).astype(int) - 1, n_radial_bins - 1)
    sums = np.bincount(bins, weights=flat_rho[keep], minlength=n_radial_bins)
    nums = np.bincount(bins, minlength=n_radial_bins)
    for q in range(n_radial_bins):
        if nums[q] == 0:
            continue
        r_out.append((q + 0.5) * width)
        rho_out.append(sums[q] / nums[q])
        counts.append(int(nums[q]))
    return RadialCurve(np.asarray(r_out), np.asarray(rho_out), np.asarray(counts))


def circular_moment(angles, p: int) -> CircularMoments:
    """Trigonometric moment z_p = sum exp(i p theta): R_p = |z_p|/N, phi_p = arg z_p.

    phi is None (undefined) when the resultant cancels to zero.
    """
    theta = np.asarray(angles, dtype=np.float64).reshape(-1)
    if theta.size == 0:
        raise InvalidInputError("empty angle set")
    if p < 1:
        raise ConfigurationError("moment order must be a positive integer")
    z = np.sum(np.exp(1j * p * theta))
    r = float(np.abs(z) / theta.size)
    phi = float(np.angle(z)) if r > 1e-12 else None
    return CircularMoments(p=p, r=r, phi=phi)


def circular_variance(angles) -> float:
    """1 - R_1, in [0, 1]."""
    return 1.0 - circular_moment(angles, 1).r


def circular_skewness(angles, eps: float = 1e-9) -> float:
    """R_2 sin(phi_2 - 2 phi_1) / (1 - R_1)^(3/2); undefined for point masses."""
    m1 = circular_moment(angles, 1)
    if 1.0 - m1.r < eps:
        raise DegenerateInputError("circular skewness undefined: angles concentrate on a point mass")
    m2 = circular_moment(angles, 2)
    phi1 = m1.phi if m1.phi is not None else 0.0
    phi2 = m2.phi if m2.phi is not None else 0.0
    return float(m2.r * np.sin(phi2 - 2.0 * phi1) / (1.0 - m1.r) ** 1.5)
