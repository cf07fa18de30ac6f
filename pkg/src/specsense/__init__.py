"""Blind spectrum sensing from sample-covariance eigenvalues.

The package detects occupied spectrum without knowing the signal, the
channel, or the noise power: the ratio of extreme eigenvalues of the
stacked sample covariance (MME) and the ratio of average power to the
minimum eigenvalue (EME) are compared against thresholds from
random-matrix limit laws. An energy-detection baseline, noise
pre-whitening, signal generators, and a Monte Carlo harness round out
the toolkit.
"""

from .covariance import EnergyStatistic, StackedCovariance, eigen_average, energy, sample_covariance, stack
from .detectors import (
    BlindStatistics,
    DetectorVerdict,
    SignalSpectrumSummary,
    blind_statistics,
    detect_eme,
    detect_energy,
    detect_mme,
    ed_threshold,
    eme_threshold,
    mme_threshold,
    predict_pd_eme,
    predict_pd_mme,
    signal_spectrum_summary,
)
from .eig import EigenSpectrum, eigenvalues
from .errors import ConfigError, NumericError, RegimeError, SingularCovarianceError
from .harness import (
    ChannelModel,
    DetectorSpec,
    RateCell,
    RunResult,
    Scenario,
    emit_csv,
    load_scenario,
    run_scenario,
    sweep_pd_vs_snr,
    sweep_roc,
)
from .iqfile import IqFormat, ingest_iq, write_iq
from .prewhiten import WhiteningTransform, build_whitener, whiten_covariance
from .rmt import (
    TracyWidomTable,
    WishartGeometry,
    bai_yin_lambda_min,
    build_tw_table,
    default_table,
    q_function,
    q_inverse,
    tw_cdf,
    tw_quantile,
    wishart_geometry,
)
from .rng import make_rng
from .signals import (
    FirChannelSet,
    NoiseModel,
    SampleBlock,
    SourceSpec,
    generate_noise,
    generate_signal,
    measure_snr,
    mix_at_snr,
)

__version__ = "0.1.0"
