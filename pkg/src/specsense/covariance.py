"""Stacked observation vectors and the ML x ML sample covariance.

With M channels and smoothing factor L, the stacked vector at time n is

    xhat(n) = [x(n); x(n-1); ...; x(n-L+1)],   each x(n) an M-vector,

and the sample covariance averages Ns outer products over the window
n = L-1 ... L-2+Ns. The matrix is assembled from its first block row
(M^2 * L * Ns multiply-accumulates) and propagated down the diagonals
with rank-one edge corrections, which reproduces the full outer-product
sum exactly up to floating-point reassociation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RegimeError
from .signals import SampleBlock

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-10


@dataclass(frozen=True)
class StackedCovariance:
    """Hermitian PSD sample covariance with (M, L, Ns) provenance."""

    matrix: np.ndarray
    channels: int
    smoothing: int
    num_samples: int

    def __post_init__(self):
        m = np.asarray(self.matrix)
        dim = self.channels * self.smoothing
        if m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} does not match M*L = {dim}")
        scale = float(np.linalg.norm(m))
        if scale > 0.0 and float(np.linalg.norm(m - m.conj().T)) > HERMITIAN_RTOL * scale:
            raise ValueError("matrix is not Hermitian within tolerance")
        trace = float(np.real(np.trace(m)))
        floor = -PSD_RTOL * max(trace, 0.0) / dim if dim else 0.0
        if trace != 0.0 and float(np.min(np.linalg.eigvalsh(m))) < floor:
            raise ValueError("matrix is not positive semidefinite within tolerance")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.channels * self.smoothing

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))


@dataclass(frozen=True)
class EnergyStatistic:
    """Average received power T over the first Ns samples of M channels."""

    value: float
    channels: int
    num_samples: int

    def __post_init__(self):
        if self.value < 0.0:
            raise ValueError("average power cannot be negative")


def stack(block: SampleBlock, smoothing: int) -> np.ndarray:
    """Stacked vectors as columns: out[:, k] = xhat(n) for n = L-1+k.

    Entry l*M + i of each column is channel i at lag l, matching the
    channel-ordering of the vector model.
    """
    if smoothing < 1:
        raise ValueError(f"smoothing factor must be >= 1, got {smoothing}")
    x = block.samples
    m, t = x.shape
    if t < smoothing:
        raise ValueError(f"block length {t} too short for smoothing factor {smoothing}")
    count = t - smoothing + 1
    out = np.empty((m * smoothing, count), dtype=x.dtype)
    for lag in range(smoothing):
        out[lag * m : (lag + 1) * m, :] = x[:, smoothing - 1 - lag : smoothing - 1 - lag + count]
    return out


def sample_covariance(block: SampleBlock, smoothing: int) -> StackedCovariance:
    """Sample covariance of the stacked block, Ns = T - L + 1.

    Requires Ns >= M*L so the matrix sits in the nonsingular Wishart
    regime the threshold theory assumes.
    """
    if smoothing < 1:
        raise ValueError(f"smoothing factor must be >= 1, got {smoothing}")
    x = block.samples
    x = x.astype(np.complex128 if np.iscomplexobj(x) else np.float64, copy=False)
    m, t = x.shape
    ns = t - smoothing + 1
    if ns < 1:
        raise ValueError(f"block length {t} too short for smoothing factor {smoothing}")
    if ns < m * smoothing:
        raise RegimeError(f"Ns = {ns} below M*L = {m * smoothing}; covariance would be rank-deficient")

    conj = np.conj if np.iscomplexobj(x) else (lambda a: a)
    dim = m * smoothing
    acc = np.zeros((dim, dim), dtype=x.dtype)

    # First block row: block (0, l) sums x(n) x(n-l)^H over the window.
    base = x[:, smoothing - 1 : smoothing - 1 + ns]
    first_row = []
    for lag in range(smoothing):
        shifted = x[:, smoothing - 1 - lag : smoothing - 1 - lag + ns]
        first_row.append(base @ conj(shifted.T))

    # Walk each block diagonal downward; moving (p, q) -> (p+1, q+1)
    # swaps one leading outer product in for one trailing one.
    for lag in range(smoothing):
        blockval = first_row[lag]
        for p in range(smoothing - lag):
            q = p + lag
            acc[p * m : (p + 1) * m, q * m : (q + 1) * m] = blockval
            if q + 1 < smoothing:
                head = np.outer(x[:, smoothing - 2 - p], conj(x[:, smoothing - 2 - q]))
                tail = np.outer(x[:, smoothing - 2 + ns - p], conj(x[:, smoothing - 2 + ns - q]))
                blockval = blockval + head - tail

    lower = np.tril_indices(dim, -1)
    acc[lower] = conj(acc.T)[lower]
    mat = acc / ns
    mat = (mat + conj(mat.T)) / 2.0
    return StackedCovariance(mat, channels=m, smoothing=smoothing, num_samples=ns)


def power_sum(block: SampleBlock, num_samples: int) -> float:
    """Raw sum of |x_i(n)|^2 over the first num_samples of every channel."""
    if num_samples < 1:
        raise ValueError(f"num_samples must be >= 1, got {num_samples}")
    if block.num_samples < num_samples:
        raise ValueError(f"block length {block.num_samples} shorter than Ns = {num_samples}")
    seg = block.samples[:, :num_samples]
    total = np.sum(seg.real.astype(np.float64) ** 2)
    if np.iscomplexobj(seg):
        total += np.sum(seg.imag.astype(np.float64) ** 2)
    return float(total)


def energy(block: SampleBlock, num_samples: int) -> EnergyStatistic:
    """Average power T(Ns) over the first Ns samples."""
    total = power_sum(block, num_samples)
    return EnergyStatistic(
        value=total / (block.channels * num_samples),
        channels=block.channels,
        num_samples=num_samples,
    )


def eigen_average(cov: StackedCovariance) -> float:
    """Mean eigenvalue of the covariance: trace / (M*L)."""
    return cov.trace / cov.dim
