"""Covariance-domain pre-whitening for receivers with a known FIR filter.

Noise that passed a K-tap filter f is correlated: the stacked L-vector of
filtered noise has statistical covariance sigma^2 * G with G = H H^T
built from the banded L x (L+K) filter matrix H. G factors as Qw^2 with
Qw positive-definite Hermitian, and Qw^-1 R Qw^-1 restores a white-noise
covariance. Qw^-1 depends only on the filter, so it is precomputed once
and reused across blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import StackedCovariance

GRAM_CONDITION_RTOL = 1e-12


@dataclass(frozen=True)
class WhiteningTransform:
    """Precomputed Gram matrix, its square root, and the inverse root."""

    filter_taps: np.ndarray
    gram: np.ndarray
    qw: np.ndarray
    qw_inv: np.ndarray
    smoothing: int

    @property
    def filter_order(self) -> int:
        return self.filter_taps.size - 1


def filter_matrix(filter_taps: np.ndarray, smoothing: int) -> np.ndarray:
    """Banded L x (L+K) convolution matrix of the receive filter."""
    taps = np.asarray(filter_taps, dtype=float).ravel()
    if smoothing < 1:
        raise ValueError(f"smoothing factor must be >= 1, got {smoothing}")
    if taps.size < 1 or not np.any(taps != 0.0):
        raise ValueError("filter must have at least one nonzero tap")
    order = taps.size - 1
    h = np.zeros((smoothing, smoothing + order))
    for row in range(smoothing):
        h[row, row : row + order + 1] = taps
    return h


def build_whitener(filter_taps: np.ndarray, smoothing: int) -> WhiteningTransform:
    """Whitening transform for the given filter at smoothing factor L."""
    h = filter_matrix(filter_taps, smoothing)
    gram = h @ h.T
    vals, vecs = np.linalg.eigh(gram)
    if vals[0] < GRAM_CONDITION_RTOL * vals[-1]:
        raise ValueError(
            f"filter Gram matrix is numerically singular (eigenvalue ratio {vals[0] / vals[-1]:.2e})"
        )
    root = np.sqrt(vals)
    qw = (vecs * root) @ vecs.T
    qw_inv = (vecs / root) @ vecs.T
    return WhiteningTransform(
        filter_taps=np.asarray(filter_taps, dtype=float).ravel().copy(),
        gram=gram,
        qw=qw,
        qw_inv=qw_inv,
        smoothing=smoothing,
    )


def whiten_covariance(transform: WhiteningTransform, cov: StackedCovariance) -> StackedCovariance:
    """Apply Qw^-1 R Qw^-1 to a stacked covariance.

    The transform is defined on the single-stream lag structure; with
    M > 1 the same filter acts on every channel, so the whitener extends
    as a Kronecker product over the (lag, channel) block ordering.
    """
    if cov.smoothing != transform.smoothing:
        raise ValueError(
            f"covariance smoothing {cov.smoothing} does not match whitener L = {transform.smoothing}"
        )
    if cov.channels == 1:
        w = transform.qw_inv
    else:
        w = np.kron(transform.qw_inv, np.eye(cov.channels))
    out = w @ cov.matrix @ w.conj().T if np.iscomplexobj(cov.matrix) else w @ cov.matrix @ w.T
    out = (out + out.conj().T) / 2.0
    return StackedCovariance(
        out,
        channels=cov.channels,
        smoothing=cov.smoothing,
        num_samples=cov.num_samples,
    )
