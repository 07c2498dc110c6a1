"""Binary field-file format and synthetic dataset builders.

File layout: 24-byte header -- magic ``GANOFLD1`` then N, H, W, C as
little-endian uint32 -- followed by N*H*W*C little-endian float32 values
in (sample, row, col, channel) order. Values are stored in 32-bit
precision; everything downstream upcasts to 64-bit.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMagicError,
    ConfigurationError,
    FieldFileError,
    ShapeOverflowError,
    TruncatedPayloadError,
)
from .grf import GRFSpec, sample_grf
from .grid import FieldBatch, Grid2D, wrap_phase
from .rng import SeededRng

MAGIC = b"GANOFLD1"
_HEADER = struct.Struct("<8sIIII")
#: refuse headers declaring more elements than this (guards allocation)
MAX_ELEMENTS = 2**32
#: samples generated per chunk when building datasets
_CHUNK = 512


def write_field_file(path, values: np.ndarray) -> None:
    v = np.asarray(values)
    if v.ndim != 4:
        raise ConfigurationError(f"expected (n, h, w, c) values, got shape {v.shape}")
    n, h, w, c = v.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n, h, w, c))
        fh.write(np.ascontiguousarray(v, dtype="<f4").tobytes())


def load_field_file(path, wrap: bool = False) -> FieldBatch:
    """Read a field file; `wrap=True` re-wraps values into (-pi, pi]."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise FieldFileError(f"{path}: file shorter than the 24-byte header")
        magic, n, h, w, c = _HEADER.unpack(head)
        if magic != MAGIC:
            raise BadMagicError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        n_elem = n * h * w * c
        if n_elem == 0:
            raise FieldFileError(f"{path}: header declares an empty tensor {n}x{h}x{w}x{c}")
        if n_elem > MAX_ELEMENTS:
            raise ShapeOverflowError(f"{path}: header declares {n_elem} elements (cap {MAX_ELEMENTS})")
        payload = fh.read()
    expected = 4 * n_elem
    if len(payload) < expected:
        raise TruncatedPayloadError(f"{path}: payload is {len(payload)} bytes, header needs {expected}")
    if len(payload) > expected:
        raise FieldFileError(f"{path}: {len(payload) - expected} trailing bytes after the payload")
    values = np.frombuffer(payload, dtype="<f4").astype(np.float64).reshape(n, h, w, c)
    batch = FieldBatch(Grid2D(h, w), values)
    return wrap_phase(batch) if wrap else batch


@dataclass(frozen=True)
class DatasetSpec:
    """What a training dataset is: a generator recipe or an external file."""

    kind: str  # "grf" | "mixture" | "external"
    grid: Grid2D | None = None
    count: int | None = None
    seed: int | None = None
    grf: GRFSpec | None = None
    mean_a: float = 1.0
    mean_b: float = -1.0
    path: str | None = None
    wrap: bool = False

    def __post_init__(self):
        if self.kind in ("grf", "mixture"):
            if self.grid is None or self.count is None or self.seed is None or self.grf is None:
                raise ConfigurationError(f"{self.kind} dataset needs grid, count, seed and a GRF spec")
        elif self.kind == "external":
            if self.path is None:
                raise ConfigurationError("external dataset needs a path")
        else:
            raise ConfigurationError(f"unknown dataset kind {self.kind!r}")


def _grf_values(spec: GRFSpec, grid: Grid2D, count: int, rng: SeededRng) -> np.ndarray:
    chunks = [
        sample_grf(spec, grid, min(_CHUNK, count - s), rng, start=s).values
        for s in range(0, count, _CHUNK)
    ]
    return np.concatenate(chunks, axis=0)


def _mixture_values(spec: DatasetSpec, rng: SeededRng) -> np.ndarray:
    base = spec.grf
    if base.mean != 0.0:
        base = GRFSpec(base.tau, base.alpha, base.sigma, mean=0.0)
    flips = rng.stream("assign").random(spec.count) < 0.5
    means = np.where(flips, spec.mean_a, spec.mean_b)
    values = _grf_values(base, spec.grid, spec.count, rng.child("fluct"))
    return values + means[:, None, None, None]


def realize_dataset(spec: DatasetSpec) -> FieldBatch:
    """Materialize the dataset in memory (float64, stored precision for files)."""
    if spec.kind == "external":
        return load_field_file(spec.path, wrap=spec.wrap)
    rng = SeededRng(spec.seed).child("dataset", spec.kind)
    if spec.kind == "grf":
        values = _grf_values(spec.grf, spec.grid, spec.count, rng)
    else:
        values = _mixture_values(spec, rng)
    # round-trip through storage precision so in-memory use matches files
    return FieldBatch(spec.grid, values.astype("<f4").astype(np.float64))


def make_grf_dataset(grf: GRFSpec, count: int, grid: Grid2D, seed: int, path) -> DatasetSpec:
    spec = DatasetSpec(kind="grf", grid=grid, count=count, seed=seed, grf=grf)
    rng = SeededRng(seed).child("dataset", "grf")
    write_field_file(path, _grf_values(grf, grid, count, rng))
    return spec

def make_mixture_dataset(count: int, grid: Grid2D, seed: int, path,
                         mean_a: float = 1.0, mean_b: float = -1.0,
                         tau: float = 1.0, alpha: float = 2.0, sigma: float | None = None) -> DatasetSpec:
    """Per sample, an equal-chance mean of `mean_a` or `mean_b` plus a shared GRF fluctuation."""
    grf = GRFSpec(tau=tau, alpha=alpha, sigma=sigma, mean=0.0)
    spec = DatasetSpec(kind="mixture", grid=grid, count=count, seed=seed, grf=grf,
                       mean_a=mean_a, mean_b=mean_b)
    rng = SeededRng(seed).child("dataset", "mixture")
    write_field_file(path, _mixture_values(spec, rng))
    return spec
