"""Real eigenvalue spectrum of Hermitian matrices.

Only eigenvalues are needed (never eigenvectors), so this wraps the
LAPACK symmetric/Hermitian solver behind the contracts the detectors
rely on: symmetrization of near-Hermitian input, descending order, and
clamping of PSD round-off negatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import NumericError

ASYMMETRY_RTOL = 1e-8
CLAMP_RTOL = 1e-10


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenvalues sorted descending; sum matches the input trace."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("values must be a non-empty 1-D array")
        if np.any(np.diff(v) > 0.0):
            raise ValueError("values must be sorted descending")
        object.__setattr__(self, "values", v)

    @property
    def dimension(self) -> int:
        return self.values.size

    @property
    def lambda_max(self) -> float:
        return float(self.values[0])

    @property
    def lambda_min(self) -> float:
        return float(self.values[-1])

    def extremes(self) -> Tuple[float, float]:
        return self.lambda_max, self.lambda_min


def eigenvalues(matrix: np.ndarray) -> EigenSpectrum:
    """All real eigenvalues of a Hermitian matrix, descending.

    The input is symmetrized by averaging with its conjugate transpose;
    asymmetry beyond 1e-8 relative is a contract violation. For PSD
    inputs, negative round-off values above -1e-10 * trace / dim are
    clamped to zero.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or (np.iscomplexobj(a) and not np.all(np.isfinite(a.imag))):
        raise NumericError("matrix contains non-finite entries")
    scale = float(np.linalg.norm(a))
    if scale > 0.0 and float(np.linalg.norm(a - a.conj().T)) > ASYMMETRY_RTOL * scale:
        raise ValueError("matrix is too far from Hermitian")
    sym = (a + a.conj().T) / 2.0

    vals = np.linalg.eigvalsh(sym)[::-1].copy()

    trace = float(np.real(np.trace(sym)))
    clamp_floor = -CLAMP_RTOL * abs(trace) / a.shape[0] if a.shape[0] else 0.0
    tiny_negative = (vals < 0.0) & (vals >= clamp_floor)
    vals[tiny_negative] = 0.0
    return EigenSpectrum(vals)
