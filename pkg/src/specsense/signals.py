"""Sample-block generation: noise, modulated sources, FIR channels, SNR mixing.

The received-signal model is a P-source, M-channel FIR system

    x_i(n) = sum_j sum_k h_ij(k) s_j(n - k) + eta_i(n),

with zero pre-history (s_j(n) = 0 for n < 0). Noise is iid zero-mean
Gaussian; an optional uncertainty factor B (dB) draws the realized
per-block variance as sigma^2 * 10^(alpha/10) with alpha uniform on
[-B, B].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.signal import lfilter

from .rng import RngLike, as_rng

_SOURCE_KINDS = ("iid-bpsk", "iid-gaussian", "fm-microphone")


@dataclass(frozen=True)
class SampleBlock:
    """M-channel record of baseband samples, shape (channels, num_samples)."""

    samples: np.ndarray
    sample_rate: Optional[float] = None

    def __post_init__(self):
        arr = np.asarray(self.samples)
        if arr.ndim != 2:
            raise ValueError(f"samples must be 2-D (channels, time), got ndim={arr.ndim}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"samples must be non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples contain non-finite values")
        object.__setattr__(self, "samples", arr)

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def num_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.samples)

    def scaled(self, factor: float) -> "SampleBlock":
        return SampleBlock(self.samples * factor, self.sample_rate)


@dataclass(frozen=True)
class FirChannelSet:
    """FIR taps h_ij(k) for P sources into M channels.

    ``taps[j]`` is the (M, N_j + 1) coefficient array of source j; orders
    N_j may differ between sources. Every source must reach the receivers
    through at least one nonzero tap.
    """

    taps: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.taps:
            raise ValueError("channel set needs at least one source")
        clean = []
        m = None
        for j, t in enumerate(self.taps):
            arr = np.atleast_2d(np.asarray(t, dtype=float))
            if arr.ndim != 2 or arr.shape[1] < 1:
                raise ValueError(f"taps[{j}] must be (M, N_j + 1), got shape {arr.shape}")
            if m is None:
                m = arr.shape[0]
            elif arr.shape[0] != m:
                raise ValueError(f"taps[{j}] has {arr.shape[0]} channels, expected {m}")
            if not np.any(arr != 0.0):
                raise ValueError(f"source {j} has all-zero taps; it is unreachable")
            clean.append(arr)
        object.__setattr__(self, "taps", tuple(clean))

    @property
    def channels(self) -> int:
        return self.taps[0].shape[0]

    @property
    def num_sources(self) -> int:
        return len(self.taps)

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(t.shape[1] - 1 for t in self.taps)

    @property
    def total_order(self) -> int:
        return sum(self.orders)

    @classmethod
    def random(cls, num_sources: int, channels: int, orders: Sequence[int], rng: RngLike) -> "FirChannelSet":
        """Gaussian taps, the whole set normalized to unit total power."""
        if len(orders) != num_sources:
            raise ValueError(f"need {num_sources} orders, got {len(orders)}")
        gen = as_rng(rng)
        raw = [gen.standard_normal((channels, n + 1)) for n in orders]
        power = sum(float(np.sum(t**2)) for t in raw)
        if power <= 0.0:
            raise ValueError("degenerate zero channel draw")
        scale = 1.0 / np.sqrt(power)
        return cls(tuple(t * scale for t in raw))

    @classmethod
    def identity(cls, channels: int) -> "FirChannelSet":
        """Flat single-tap channels, one source per channel (M == P)."""
        eye = np.eye(channels)
        return cls(tuple(eye[:, j : j + 1] for j in range(channels)))


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian noise with variance sigma^2 and uncertainty bound B in dB."""

    variance: float = 1.0
    uncertainty_db: float = 0.0

    def __post_init__(self):
        if self.variance <= 0.0:
            raise ValueError(f"variance must be positive, got {self.variance}")
        if self.uncertainty_db < 0.0:
            raise ValueError(f"uncertainty_db must be >= 0, got {self.uncertainty_db}")

    def realized_variance(self, rng: RngLike) -> float:
        """Per-trial variance; B = 0 returns the nominal variance exactly."""
        if self.uncertainty_db == 0.0:
            return self.variance
        alpha_db = as_rng(rng).uniform(-self.uncertainty_db, self.uncertainty_db)
        return self.variance * 10.0 ** (alpha_db / 10.0)


@dataclass(frozen=True)
class SourceSpec:
    """Primary-user source description.

    kind:
        "iid-bpsk"      equiprobable +/-amplitude symbols
        "iid-gaussian"  N(0, amplitude^2) samples
        "fm-microphone" frequency-modulated sinusoid baseband, complex
                        constant-envelope output at ``sample_rate``
    The FM parameters are configuration knobs, not calibrated values.
    """

    kind: str
    amplitude: float = 1.0
    baseband_hz: float = 3000.0
    deviation_hz: float = 4000.0
    carrier_offset_hz: float = 0.0
    sample_rate: float = 6e6

    def __post_init__(self):
        if self.kind not in _SOURCE_KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}; expected one of {_SOURCE_KINDS}")
        if self.amplitude <= 0.0:
            raise ValueError("amplitude must be positive")
        if self.kind == "fm-microphone":
            if self.sample_rate <= 0.0:
                raise ValueError("sample_rate must be positive")
            if self.deviation_hz < 0.0 or self.baseband_hz < 0.0:
                raise ValueError("FM parameters must be non-negative")


def _source_samples(spec: SourceSpec, num: int, rng: np.random.Generator) -> np.ndarray:
    if spec.kind == "iid-bpsk":
        return spec.amplitude * (2.0 * rng.integers(0, 2, size=num) - 1.0)
    if spec.kind == "iid-gaussian":
        return spec.amplitude * rng.standard_normal(num)
    # FM of a sinusoid baseband; unit envelope by construction. A
    # zero-frequency baseband counts as silence and yields a pure carrier.
    n = np.arange(num)
    ts = 1.0 / spec.sample_rate
    carrier_phase = rng.uniform(0.0, 2.0 * np.pi)
    baseband_phase = rng.uniform(0.0, 2.0 * np.pi)
    if spec.baseband_hz > 0.0 and spec.deviation_hz > 0.0:
        baseband = np.sin(2.0 * np.pi * spec.baseband_hz * n * ts + baseband_phase)
        modulation = spec.deviation_hz * ts * np.cumsum(baseband)
    else:
        modulation = 0.0
    phase = carrier_phase + 2.0 * np.pi * (spec.carrier_offset_hz * n * ts + modulation)
    return spec.amplitude * np.exp(1j * phase)


def generate_noise(
    model: NoiseModel,
    channels: int,
    num_samples: int,
    rng: RngLike,
    complex_valued: bool = False,
) -> SampleBlock:
    """iid zero-mean Gaussian block with the model's realized variance.

    Complex noise splits the variance evenly between independent real and
    imaginary parts. Deterministic for a fixed seed.
    """
    if channels < 1 or num_samples < 1:
        raise ValueError(f"invalid dimensions M={channels}, T={num_samples}")
    gen = as_rng(rng)
    var = model.realized_variance(gen)
    if complex_valued:
        std = np.sqrt(var / 2.0)
        data = std * (gen.standard_normal((channels, num_samples)) + 1j * gen.standard_normal((channels, num_samples)))
    else:
        data = np.sqrt(var) * gen.standard_normal((channels, num_samples))
    return SampleBlock(data)


def generate_signal(
    spec: SourceSpec,
    channels: FirChannelSet,
    num_samples: int,
    rng: RngLike,
) -> SampleBlock:
    """Noiseless received block x_i(n) = sum_j sum_k h_ij(k) s_j(n-k).

    Source streams are drawn independently per source from ``spec``; the
    convolution uses zero pre-history, so the first N_j outputs see a
    truncated channel.
    """
    if num_samples < 1:
        raise ValueError(f"invalid length T={num_samples}")
    gen = as_rng(rng)
    m = channels.channels
    sources = [_source_samples(spec, num_samples, gen) for _ in range(channels.num_sources)]
    out_dtype = complex if any(np.iscomplexobj(s) for s in sources) else float
    out = np.zeros((m, num_samples), dtype=out_dtype)
    for j, taps in enumerate(channels.taps):
        for i in range(m):
            hij = taps[i]
            if np.any(hij != 0.0):
                out[i] += lfilter(hij, [1.0], sources[j])
    return SampleBlock(out)


def measure_snr(signal: SampleBlock, noise: SampleBlock) -> float:
    """Empirical SNR in dB: mean squared norm of the signal over the noise."""
    if signal.samples.shape != noise.samples.shape:
        raise ValueError(
            f"signal shape {signal.samples.shape} does not match noise shape {noise.samples.shape}"
        )
    p_noise = float(np.mean(np.abs(noise.samples) ** 2))
    if p_noise <= 0.0:
        raise ValueError("noise block has zero power")
    p_signal = float(np.mean(np.abs(signal.samples) ** 2))
    if p_signal == 0.0:
        return float("-inf")
    return 10.0 * np.log10(p_signal / p_noise)


def mix_at_snr(
    signal: SampleBlock,
    noise: SampleBlock,
    target_snr_db: float,
) -> Tuple[SampleBlock, float]:
    """Scale the signal onto the noise so the measured SNR hits the target.

    Returns the mixture block and the amplitude scale applied to the
    signal.
    """
    if signal.samples.shape != noise.samples.shape:
        raise ValueError(
            f"signal shape {signal.samples.shape} does not match noise shape {noise.samples.shape}"
        )
    p_signal = float(np.mean(np.abs(signal.samples) ** 2))
    if p_signal <= 0.0:
        raise ValueError("cannot set an SNR for a zero-power signal")
    p_noise = float(np.mean(np.abs(noise.samples) ** 2))
    if p_noise <= 0.0:
        raise ValueError("noise block has zero power")
    scale = float(np.sqrt(10.0 ** (target_snr_db / 10.0) * p_noise / p_signal))
    mixed = SampleBlock(scale * signal.samples + noise.samples, signal.sample_rate or noise.sample_rate)
    return mixed, scale
