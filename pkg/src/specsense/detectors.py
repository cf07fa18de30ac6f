"""Blind eigenvalue detectors (MME, EME) and the energy-detection baseline.

MME compares lambda_max/lambda_min of the stacked sample covariance to a
threshold derived from the order-1 Tracy-Widom law; EME compares the
average power to lambda_min with a Gaussian-approximation threshold.
Both statistics depend on the data only through scale-free ratios, so
neither needs the noise power: the covariance is normalized by its trace
before the eigensolver, which makes exact rescalings of the input cancel
identically instead of merely approximately. Energy detection divides by
an assumed noise power and is therefore exposed to noise uncertainty;
that asymmetry is the point of the comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .covariance import power_sum, sample_covariance
from .eig import eigenvalues
from .errors import RegimeError, SingularCovarianceError
from .rmt import TracyWidomTable, default_table, q_function, q_inverse, tw_cdf, tw_quantile, wishart_geometry
from .signals import FirChannelSet, SampleBlock

LAMBDA_MIN_FLOOR = 1e-30

MME = "MME"
EME = "EME"
ED = "ED"


@dataclass(frozen=True)
class DetectorVerdict:
    """Outcome of one detection: statistic, threshold, and the decision."""

    detector: str
    statistic: float
    threshold: float
    decision: bool
    channels: int
    smoothing: Optional[int]
    num_samples: int
    pfa_target: float

    def __post_init__(self):
        if self.statistic < 0.0:
            raise ValueError("statistic cannot be negative")
        if self.decision != (self.statistic > self.threshold):
            raise ValueError("decision must equal statistic > threshold")


@dataclass(frozen=True)
class SignalSpectrumSummary:
    """Extreme eigenvalues and mean of the noiseless signal covariance."""

    rho_max: float
    rho_min: float
    trace_over_dim: float
    sigma2: float

    def __post_init__(self):
        if self.rho_min < -1e-12 or self.rho_max < self.rho_min:
            raise ValueError("need rho_max >= rho_min >= 0")
        if not (self.rho_min - 1e-9 <= self.trace_over_dim <= self.rho_max + 1e-9):
            raise ValueError("trace/dim must lie between the extreme eigenvalues")
        if self.sigma2 <= 0.0:
            raise ValueError("sigma2 must be positive")


@dataclass(frozen=True)
class BlindStatistics:
    """Per-block quantities shared by the blind detectors."""

    mme: float
    eme: float
    lambda_max: float
    lambda_min: float
    trace_mean: float


def mme_threshold(
    num_samples: int,
    channels: int,
    smoothing: int,
    pfa: float,
    table: Optional[TracyWidomTable] = None,
) -> float:
    """Eigenvalue-ratio threshold for a target false-alarm probability.

    gamma1 = (sqrt(Ns)+sqrt(ML))^2 / (sqrt(Ns)-sqrt(ML))^2
             * (1 + (sqrt(Ns)+sqrt(ML))^(-2/3) / (Ns*ML)^(1/6) * F1^-1(1 - pfa))
    """
    dim = channels * smoothing
    if num_samples <= dim:
        raise RegimeError(f"need Ns > M*L, got Ns = {num_samples}, M*L = {dim}")
    if not 0.0 < pfa < 1.0:
        raise ValueError(f"pfa must be in (0, 1), got {pfa}")
    if table is None:
        table = default_table()
    root_n = math.sqrt(num_samples)
    root_d = math.sqrt(dim)
    ratio = (root_n + root_d) ** 2 / (root_n - root_d) ** 2
    correction = (root_n + root_d) ** (-2.0 / 3.0) / (num_samples * dim) ** (1.0 / 6.0)
    return ratio * (1.0 + correction * tw_quantile(table, 1.0 - pfa))


def eme_threshold(num_samples: int, channels: int, smoothing: int, pfa: float) -> float:
    """Energy-over-lambda_min threshold from the Gaussian approximation.

    gamma2 = (sqrt(2/(M*Ns)) * Q^-1(pfa) + 1) * Ns / (sqrt(Ns)-sqrt(ML))^2
    """
    dim = channels * smoothing
    if num_samples <= dim:
        raise RegimeError(f"need Ns > M*L, got Ns = {num_samples}, M*L = {dim}")
    if not 0.0 < pfa < 1.0:
        raise ValueError(f"pfa must be in (0, 1), got {pfa}")
    root_n = math.sqrt(num_samples)
    root_d = math.sqrt(dim)
    lead = math.sqrt(2.0 / (channels * num_samples)) * q_inverse(pfa) + 1.0
    return lead * num_samples / (root_n - root_d) ** 2


def ed_threshold(num_samples: int, channels: int, pfa: float) -> float:
    """Energy-detection threshold on T/sigma2 under exact noise knowledge."""
    if num_samples < 1:
        raise ValueError(f"num_samples must be >= 1, got {num_samples}")
    if not 0.0 < pfa < 1.0:
        raise ValueError(f"pfa must be in (0, 1), got {pfa}")
    return 1.0 + math.sqrt(2.0 / (channels * num_samples)) * q_inverse(pfa)


def blind_statistics(
    block: SampleBlock,
    smoothing: int,
    num_samples: int,
    whitener=None,
) -> BlindStatistics:
    """MME and EME statistics from one covariance pass.

    The covariance is divided by its trace before the eigenvalue solve;
    the returned lambda_max/lambda_min are rescaled back to covariance
    units, while the ratio statistics come straight from the normalized
    spectrum. A WhiteningTransform, when given, is applied to the
    covariance first (receivers with a known narrowband filter).
    """
    window = smoothing - 1 + num_samples
    if block.num_samples < window:
        raise ValueError(
            f"block length {block.num_samples} too short for L-1+Ns = {window}"
        )
    cov = sample_covariance(SampleBlock(block.samples[:, :window], block.sample_rate), smoothing)
    if whitener is not None:
        from .prewhiten import whiten_covariance

        cov = whiten_covariance(whitener, cov)
    trace = cov.trace
    if trace <= 0.0:
        raise SingularCovarianceError("covariance trace is not positive (zero block?)")
    spectrum = eigenvalues(cov.matrix / trace)
    lmax_c = spectrum.lambda_max
    lmin_c = spectrum.lambda_min
    if lmin_c <= LAMBDA_MIN_FLOOR * lmax_c:
        raise SingularCovarianceError(
            f"minimum eigenvalue {lmin_c * trace:.3e} is numerically zero; "
            "eigenvalue-ratio statistics are undefined"
        )
    total_power = power_sum(block, num_samples)
    m = block.channels
    return BlindStatistics(
        mme=lmax_c / lmin_c,
        eme=(total_power / trace) / (m * num_samples * lmin_c),
        lambda_max=lmax_c * trace,
        lambda_min=lmin_c * trace,
        trace_mean=trace / cov.dim,
    )


def detect_mme(
    block: SampleBlock,
    smoothing: int,
    num_samples: int,
    pfa: float,
    table: Optional[TracyWidomTable] = None,
) -> DetectorVerdict:
    """Max/min eigenvalue detection on the first L-1+Ns samples."""
    stats = blind_statistics(block, smoothing, num_samples)
    threshold = mme_threshold(num_samples, block.channels, smoothing, pfa, table)
    return DetectorVerdict(
        detector=MME,
        statistic=stats.mme,
        threshold=threshold,
        decision=stats.mme > threshold,
        channels=block.channels,
        smoothing=smoothing,
        num_samples=num_samples,
        pfa_target=pfa,
    )


def detect_eme(
    block: SampleBlock,
    smoothing: int,
    num_samples: int,
    pfa: float,
) -> DetectorVerdict:
    """Energy over minimum-eigenvalue detection."""
    stats = blind_statistics(block, smoothing, num_samples)
    threshold = eme_threshold(num_samples, block.channels, smoothing, pfa)
    return DetectorVerdict(
        detector=EME,
        statistic=stats.eme,
        threshold=threshold,
        decision=stats.eme > threshold,
        channels=block.channels,
        smoothing=smoothing,
        num_samples=num_samples,
        pfa_target=pfa,
    )


def detect_energy(
    block: SampleBlock,
    num_samples: int,
    assumed_sigma2: float,
    pfa: float,
) -> DetectorVerdict:
    """Average-power detection against an assumed noise power."""
    if assumed_sigma2 <= 0.0:
        raise ValueError(f"assumed_sigma2 must be positive, got {assumed_sigma2}")
    statistic = power_sum(block, num_samples) / (block.channels * num_samples) / assumed_sigma2
    threshold = ed_threshold(num_samples, block.channels, pfa)
    return DetectorVerdict(
        detector=ED,
        statistic=statistic,
        threshold=threshold,
        decision=statistic > threshold,
        channels=block.channels,
        smoothing=None,
        num_samples=num_samples,
        pfa_target=pfa,
    )


def filtering_matrix(channels: FirChannelSet, smoothing: int) -> np.ndarray:
    """Block-Toeplitz ML x (N + P*L) matrix mapping stacked source samples
    to stacked noiseless observations."""
    if smoothing < 1:
        raise ValueError(f"smoothing factor must be >= 1, got {smoothing}")
    m = channels.channels
    cols = []
    for taps in channels.taps:
        order = taps.shape[1] - 1
        bj = np.zeros((m * smoothing, order + smoothing))
        for lag in range(smoothing):
            bj[lag * m : (lag + 1) * m, lag : lag + order + 1] = taps
        cols.append(bj)
    return np.hstack(cols)


def signal_spectrum_summary(
    channels: FirChannelSet,
    smoothing: int,
    sigma2: float,
    source_cov: Union[float, np.ndarray] = 1.0,
) -> SignalSpectrumSummary:
    """Extreme eigenvalues of the statistical signal covariance H Rs H^H.

    ``source_cov`` is either the common per-sample source variance (iid
    sources) or a full (N + P*L) square covariance matrix.
    """
    h = filtering_matrix(channels, smoothing)
    if np.isscalar(source_cov):
        gram = float(source_cov) * (h @ h.T)
    else:
        rs = np.asarray(source_cov, dtype=float)
        if rs.shape != (h.shape[1], h.shape[1]):
            raise ValueError(
                f"source covariance shape {rs.shape} does not match N + P*L = {h.shape[1]}"
            )
        gram = h @ rs @ h.T
    spectrum = eigenvalues(gram)
    return SignalSpectrumSummary(
        rho_max=spectrum.lambda_max,
        rho_min=max(spectrum.lambda_min, 0.0),
        trace_over_dim=float(np.trace(gram)) / gram.shape[0],
        sigma2=sigma2,
    )


def predict_pd_mme(
    summary: SignalSpectrumSummary,
    num_samples: int,
    channels: int,
    smoothing: int,
    gamma1: float,
    table: Optional[TracyWidomTable] = None,
) -> float:
    """Approximate MME detection probability for a known signal spectrum.

    Deliberately conservative: the same deflated lambda_min that sets the
    threshold is not reused here, mirroring the published construction.
    """
    if table is None:
        table = default_table()
    geom = wishart_geometry(num_samples, channels, smoothing)
    arg = (
        gamma1 * num_samples
        + num_samples * (gamma1 * summary.rho_min - summary.rho_max) / summary.sigma2
        - geom.mu
    ) / geom.nu
    return 1.0 - float(tw_cdf(table, arg))


def predict_pd_eme(
    summary: SignalSpectrumSummary,
    num_samples: int,
    channels: int,
    smoothing: int,
    gamma2: float,
) -> float:
    """Approximate EME detection probability for a known signal spectrum."""
    dim = channels * smoothing
    if num_samples <= dim:
        raise RegimeError(f"need Ns > M*L, got Ns = {num_samples}, M*L = {dim}")
    root_n = math.sqrt(num_samples)
    lambda_min_est = summary.rho_min + summary.sigma2 / root_n * (root_n - math.sqrt(dim))
    arg = (gamma2 * lambda_min_est - summary.trace_over_dim - summary.sigma2) / (
        math.sqrt(2.0 / (channels * num_samples)) * summary.sigma2
    )
    return q_function(arg)
