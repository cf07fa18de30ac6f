"""Monte Carlo experiment engine and scenario configuration.

A scenario bundles the system dimensions (M, P, L, Ns), the signal and
channel models, the detector list, and the trial budget. Every trial
derives its random streams from (master_seed, trial_index, stream tag),
so results are reproducible bit-for-bit and independent of the worker
count: workers only decide *who* computes a trial, never *what* it
contains. Within one trial all detectors see the same sample block, so
detector comparisons are paired.

Energy detection under noise uncertainty keeps its threshold anchored to
the assumed noise power while the true per-trial power moves by the
uncertainty factor; this is applied as a multiplicative factor on the
energy statistic, which is exactly equivalent to scaling the whole block
(the blind statistics are scale-invariant, so pairing is unaffected).
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml
from scipy.signal import lfilter

from . import detectors as det
from .covariance import power_sum
from .errors import ConfigError
from .iqfile import IqFormat, ingest_iq
from .prewhiten import build_whitener
from .rng import STREAM_CHANNEL, STREAM_NOISE, STREAM_SEGMENT, STREAM_SIGNAL, STREAM_UNCERTAINTY, make_rng
from .signals import FirChannelSet, NoiseModel, SampleBlock, SourceSpec, generate_noise, generate_signal, mix_at_snr

SIGNAL_KINDS = ("none", "iid-bpsk", "iid-gaussian", "fm-microphone", "iq-file")
CHANNEL_KINDS = ("random-gaussian", "explicit", "identity")

CSV_COLUMNS = ("scenario", "detector", "snr_db", "ns", "threshold", "rate", "ci_low", "ci_high", "trials", "seed")


@dataclass(frozen=True)
class DetectorSpec:
    """One detector under test; ED may carry a noise-uncertainty bound."""

    kind: str
    uncertainty_db: float = 0.0

    def __post_init__(self):
        if self.kind not in (det.MME, det.EME, det.ED):
            raise ConfigError(f"detectors: unknown kind {self.kind!r}")
        if self.uncertainty_db < 0.0:
            raise ConfigError("detectors: uncertainty_db must be >= 0")
        if self.uncertainty_db > 0.0 and self.kind != det.ED:
            raise ConfigError("detectors: uncertainty_db only applies to ED (the blind detectors ignore noise power)")

    @property
    def label(self) -> str:
        if self.kind == det.ED and self.uncertainty_db > 0.0:
            return f"ED-{self.uncertainty_db:g}dB"
        return self.kind


@dataclass(frozen=True)
class ChannelModel:
    """How the per-trial FIR channels are produced."""

    kind: str
    orders: Tuple[int, ...] = ()
    taps: Optional[Tuple[np.ndarray, ...]] = None

    def realize(self, num_sources: int, channels: int, rng) -> FirChannelSet:
        if self.kind == "random-gaussian":
            return FirChannelSet.random(num_sources, channels, self.orders, rng)
        if self.kind == "explicit":
            return FirChannelSet(self.taps)
        return FirChannelSet.identity(channels)


@dataclass(frozen=True)
class IqSource:
    """Captured-sample input: per trial a random contiguous segment is used."""

    path: str
    layout: Optional[str] = None
    channels: Optional[int] = None
    sample_rate: Optional[float] = None


@dataclass(frozen=True)
class Scenario:
    name: str
    m: int
    l: int
    ns: int
    trials: int
    detectors: Tuple[DetectorSpec, ...]
    p: int = 0
    signal: Optional[SourceSpec] = None
    iq: Optional[IqSource] = None
    channel: Optional[ChannelModel] = None
    snr_grid_db: Tuple[float, ...] = ()
    pfa_target: float = 0.1
    master_seed: int = 0
    noise_variance: float = 1.0
    complex_baseband: bool = False
    receive_filter: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.receive_filter and not any(t != 0.0 for t in self.receive_filter):
            raise ConfigError("receive_filter: needs at least one nonzero tap")
        if self.trials < 1:
            raise ConfigError("trials: must be >= 1")
        if self.m < 1 or self.l < 1:
            raise ConfigError("m/l: must be >= 1")
        if self.ns <= self.m * self.l:
            raise ConfigError(f"ns: must exceed m*l = {self.m * self.l} for the threshold regime")
        if not self.detectors:
            raise ConfigError("detectors: list at least one detector")
        if not 0.0 < self.pfa_target < 1.0:
            raise ConfigError("pfa_target: must be in (0, 1)")
        if self.noise_variance <= 0.0:
            raise ConfigError("noise.variance: must be positive")
        if self.is_h1:
            if not self.snr_grid_db:
                raise ConfigError("snr_grid_db: required when a signal is configured")
            if self.iq is None:
                if self.channel is None:
                    raise ConfigError("channel: required for generated signals")
                if self.p < 1:
                    raise ConfigError("p: must be >= 1 for generated signals")

    @property
    def is_h1(self) -> bool:
        return self.signal is not None or self.iq is not None

    @property
    def block_length(self) -> int:
        return self.l - 1 + self.ns

    def config_hash(self) -> str:
        def clean(obj):
            if isinstance(obj, dict):
                return {k: clean(v) for k, v in sorted(obj.items())}
            if isinstance(obj, (list, tuple)):
                return [clean(v) for v in obj]
            if isinstance(obj, np.ndarray):
                return obj.tolist()
            return obj

        blob = json.dumps(clean(asdict(self)), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:8]


@dataclass(frozen=True)
class RateCell:
    """One aggregated (detector, hypothesis/SNR) result."""

    detector: str
    snr_db: Optional[float]
    threshold: float
    rate: float
    ci_low: float
    ci_high: float
    trials: int
    mean_statistic: float


@dataclass(frozen=True)
class RunResult:
    scenario: str
    config_hash: str
    master_seed: int
    ns: int
    cells: Tuple[RateCell, ...]


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> Tuple[float, float]:
    """Wilson score interval; well-behaved at rates near 0 and 1."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z**2 / trials
    center = (p + z**2 / (2.0 * trials)) / denom
    half = z * np.sqrt(p * (1.0 - p) / trials + z**2 / (4.0 * trials**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


# ---------------------------------------------------------------------------
# scenario parsing


def _require_keys(section: dict, allowed: Sequence[str], context: str) -> None:
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"{context}: unknown key(s) {', '.join(unknown)}")


def _parse_detectors(raw, context: str) -> Tuple[DetectorSpec, ...]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{context}: must be a non-empty list")
    specs = []
    for i, entry in enumerate(raw):
        if isinstance(entry, str):
            specs.append(DetectorSpec(kind=entry))
        elif isinstance(entry, dict):
            _require_keys(entry, ("kind", "uncertainty_db"), f"{context}[{i}]")
            if "kind" not in entry:
                raise ConfigError(f"{context}[{i}]: missing 'kind'")
            specs.append(DetectorSpec(kind=entry["kind"], uncertainty_db=float(entry.get("uncertainty_db", 0.0))))
        else:
            raise ConfigError(f"{context}[{i}]: expected a name or a mapping")
    labels = [s.label for s in specs]
    if len(labels) != len(set(labels)):
        raise ConfigError(f"{context}: duplicate detector entries")
    return tuple(specs)


def _parse_signal(raw, scenario_m: int) -> Tuple[Optional[SourceSpec], Optional[IqSource], bool]:
    if raw is None:
        return None, None, False
    if not isinstance(raw, dict):
        raise ConfigError("signal: must be a mapping")
    kind = raw.get("kind")
    if kind not in SIGNAL_KINDS:
        raise ConfigError(f"signal.kind: expected one of {SIGNAL_KINDS}, got {kind!r}")
    if kind == "none":
        _require_keys(raw, ("kind",), "signal")
        return None, None, False
    if kind == "iq-file":
        _require_keys(raw, ("kind", "path", "layout", "channels", "sample_rate"), "signal")
        if "path" not in raw:
            raise ConfigError("signal.path: required for iq-file")
        iq = IqSource(
            path=str(raw["path"]),
            layout=raw.get("layout"),
            channels=None if raw.get("channels") is None else int(raw["channels"]),
            sample_rate=None if raw.get("sample_rate") is None else float(raw["sample_rate"]),
        )
        return None, iq, iq.layout == "iq"
    allowed = ("kind", "amplitude", "baseband_hz", "deviation_hz", "carrier_offset_hz", "sample_rate")
    _require_keys(raw, allowed, "signal")
    kwargs = {k: float(raw[k]) for k in allowed[1:] if k in raw}
    spec = SourceSpec(kind=kind, **kwargs)
    return spec, None, kind == "fm-microphone"


def _parse_channel(raw, p: int, m: int) -> Optional[ChannelModel]:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ConfigError("channel: must be a mapping")
    kind = raw.get("kind")
    if kind not in CHANNEL_KINDS:
        raise ConfigError(f"channel.kind: expected one of {CHANNEL_KINDS}, got {kind!r}")
    if kind == "random-gaussian":
        _require_keys(raw, ("kind", "orders"), "channel")
        orders = raw.get("orders")
        if not isinstance(orders, list) or len(orders) != p:
            raise ConfigError(f"channel.orders: need one order per source (p = {p})")
        return ChannelModel(kind=kind, orders=tuple(int(o) for o in orders))
    if kind == "explicit":
        _require_keys(raw, ("kind", "taps"), "channel")
        taps = raw.get("taps")
        if not isinstance(taps, list) or len(taps) != p:
            raise ConfigError(f"channel.taps: need one tap matrix per source (p = {p})")
        mats = []
        for j, tap in enumerate(taps):
            arr = np.atleast_2d(np.asarray(tap, dtype=float))
            if arr.shape[0] != m:
                raise ConfigError(f"channel.taps[{j}]: expected {m} rows, got {arr.shape[0]}")
            mats.append(arr)
        return ChannelModel(kind=kind, taps=tuple(mats))
    _require_keys(raw, ("kind",), "channel")
    if p != m:
        raise ConfigError("channel.kind identity: requires p == m")
    return ChannelModel(kind=kind)


def scenario_from_dict(raw: dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ConfigError("scenario: top level must be a mapping")
    allowed = (
        "name", "m", "p", "l", "ns", "trials", "master_seed", "pfa_target",
        "snr_grid_db", "signal", "channel", "noise", "detectors", "complex_baseband",
        "receive_filter",
    )
    _require_keys(raw, allowed, "scenario")
    for key in ("name", "m", "l", "ns", "trials", "detectors"):
        if key not in raw:
            raise ConfigError(f"scenario.{key}: required")
    noise = raw.get("noise") or {}
    if not isinstance(noise, dict):
        raise ConfigError("noise: must be a mapping")
    _require_keys(noise, ("variance",), "noise")

    m = int(raw["m"])
    p = int(raw.get("p", 0))
    signal, iq, complex_default = _parse_signal(raw.get("signal"), m)
    channel = _parse_channel(raw.get("channel"), p, m)
    snr_grid = raw.get("snr_grid_db") or ()
    if snr_grid and not isinstance(snr_grid, list):
        raise ConfigError("snr_grid_db: must be a list of dB values")
    rx_filter = raw.get("receive_filter") or ()
    if rx_filter and not isinstance(rx_filter, list):
        raise ConfigError("receive_filter: must be a list of FIR taps")
    return Scenario(
        name=str(raw["name"]),
        m=m,
        p=p,
        l=int(raw["l"]),
        ns=int(raw["ns"]),
        trials=int(raw["trials"]),
        detectors=_parse_detectors(raw["detectors"], "detectors"),
        signal=signal,
        iq=iq,
        channel=channel,
        snr_grid_db=tuple(float(s) for s in snr_grid),
        pfa_target=float(raw.get("pfa_target", 0.1)),
        master_seed=int(raw.get("master_seed", 0)),
        noise_variance=float(noise.get("variance", 1.0)),
        complex_baseband=bool(raw.get("complex_baseband", complex_default)),
        receive_filter=tuple(float(t) for t in rx_filter),
    )


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Parse a YAML scenario file; unknown keys are errors."""
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from exc
    if raw is None:
        raise ConfigError(f"{path}: empty scenario file")
    return scenario_from_dict(raw)


# ---------------------------------------------------------------------------
# trial engine

_IQ_CACHE: Dict[str, SampleBlock] = {}


def _iq_block(source: IqSource) -> SampleBlock:
    block = _IQ_CACHE.get(source.path)
    if block is None:
        fmt = None
        if source.layout is not None:
            fmt = IqFormat(
                layout=source.layout,
                channels=source.channels or 1,
                sample_rate=source.sample_rate,
            )
        block = ingest_iq(source.path, fmt)
        _IQ_CACHE[source.path] = block
    return block


def _trial_signal(scenario: Scenario, trial: int, length: int) -> SampleBlock:
    """Noiseless signal block for one trial (H1 scenarios only)."""
    t = length
    if scenario.iq is not None:
        data = _iq_block(scenario.iq)
        if data.channels != scenario.m:
            raise ConfigError(
                f"signal.path: file has {data.channels} channels but scenario.m = {scenario.m}"
            )
        if data.num_samples < t:
            raise ConfigError(
                f"signal.path: file holds {data.num_samples} frames, need at least {t}"
            )
        rng = make_rng(scenario.master_seed, trial, STREAM_SEGMENT)
        offset = int(rng.integers(0, data.num_samples - t + 1))
        return SampleBlock(data.samples[:, offset : offset + t], data.sample_rate)
    chan_rng = make_rng(scenario.master_seed, trial, STREAM_CHANNEL)
    channels = scenario.channel.realize(scenario.p, scenario.m, chan_rng)
    sig_rng = make_rng(scenario.master_seed, trial, STREAM_SIGNAL)
    return generate_signal(scenario.signal, channels, t, sig_rng)


def _trial_channels(scenario: Scenario, trial: int) -> Optional[FirChannelSet]:
    if scenario.iq is not None or scenario.channel is None:
        return None
    chan_rng = make_rng(scenario.master_seed, trial, STREAM_CHANNEL)
    return scenario.channel.realize(scenario.p, scenario.m, chan_rng)


def _run_trial_range(args) -> np.ndarray:
    """Worker: statistics for a contiguous range of trials.

    Returns an array of shape (len(trials), n_stat_columns); column
    layout is defined by _stat_columns.
    """
    scenario, trials, columns, with_h0, with_theo, table = args
    noise_model = NoiseModel(variance=scenario.noise_variance)
    thresholds = _thresholds(scenario, table)
    out = np.empty((len(trials), len(columns)), dtype=float)

    # Receive filter: samples pass through it (with the startup transient
    # trimmed), the blind detectors whiten the covariance it colors.
    rx_taps = np.asarray(scenario.receive_filter, dtype=float)
    transient = rx_taps.size - 1 if rx_taps.size else 0
    gen_length = scenario.block_length + transient
    whitener = build_whitener(rx_taps, scenario.l) if rx_taps.size else None

    def receive(block: SampleBlock) -> SampleBlock:
        if not rx_taps.size:
            return block
        filtered = lfilter(rx_taps, [1.0], block.samples, axis=1)[:, transient:]
        return SampleBlock(filtered, block.sample_rate)

    for row, trial in enumerate(trials):
        noise_rng = make_rng(scenario.master_seed, trial, STREAM_NOISE)
        unc_rng = make_rng(scenario.master_seed, trial, STREAM_UNCERTAINTY)
        noise = generate_noise(
            noise_model, scenario.m, gen_length, noise_rng,
            complex_valued=scenario.complex_baseband,
        )
        unc_factors = {
            spec.label: 10.0 ** (unc_rng.uniform(-spec.uncertainty_db, spec.uncertainty_db) / 10.0)
            if spec.uncertainty_db > 0.0 else 1.0
            for spec in scenario.detectors
        }

        blocks: Dict[Optional[float], SampleBlock] = {}
        scales: Dict[Optional[float], float] = {}
        if with_h0:
            blocks[None] = receive(noise)
        if scenario.is_h1:
            signal = _trial_signal(scenario, trial, gen_length)
            if signal.is_complex != noise.is_complex:
                noise = generate_noise(
                    noise_model, scenario.m, gen_length,
                    make_rng(scenario.master_seed, trial, STREAM_NOISE),
                    complex_valued=signal.is_complex,
                )
                if with_h0:
                    blocks[None] = receive(noise)
            signal_rx = receive(signal)
            noise_rx = receive(noise)
            for snr in scenario.snr_grid_db:
                blocks[snr], scales[snr] = mix_at_snr(signal_rx, noise_rx, snr)
            channels = _trial_channels(scenario, trial) if with_theo else None

        cache: Dict[Optional[float], det.BlindStatistics] = {}
        energy_cache: Dict[Optional[float], float] = {}
        summary_cache: Dict[Optional[float], det.SignalSpectrumSummary] = {}

        for col, (label, snr) in enumerate(columns):
            block = blocks[snr]
            if label in ("MME", "EME"):
                stats = cache.get(snr)
                if stats is None:
                    stats = det.blind_statistics(block, scenario.l, scenario.ns, whitener=whitener)
                    cache[snr] = stats
                out[row, col] = stats.mme if label == "MME" else stats.eme
            elif label.startswith("ED"):
                base = energy_cache.get(snr)
                if base is None:
                    base = power_sum(block, scenario.ns) / (scenario.m * scenario.ns * scenario.noise_variance)
                    energy_cache[snr] = base
                out[row, col] = base * unc_factors[label]
            else:  # theoretical prediction columns
                summary = summary_cache.get(snr)
                if summary is None:
                    amp = scenario.signal.amplitude if scenario.signal else 1.0
                    summary = det.signal_spectrum_summary(
                        channels, scenario.l, scenario.noise_variance,
                        source_cov=(scales[snr] * amp) ** 2,
                    )
                    summary_cache[snr] = summary
                if label == "MME-theo":
                    out[row, col] = det.predict_pd_mme(
                        summary, scenario.ns, scenario.m, scenario.l, thresholds["MME"], table
                    )
                else:
                    out[row, col] = det.predict_pd_eme(
                        summary, scenario.ns, scenario.m, scenario.l, thresholds["EME"]
                    )
    return out


def _thresholds(scenario: Scenario, table) -> Dict[str, float]:
    values: Dict[str, float] = {}
    for spec in scenario.detectors:
        if spec.kind == det.MME:
            values[spec.label] = det.mme_threshold(scenario.ns, scenario.m, scenario.l, scenario.pfa_target, table)
        elif spec.kind == det.EME:
            values[spec.label] = det.eme_threshold(scenario.ns, scenario.m, scenario.l, scenario.pfa_target)
        else:
            values[spec.label] = det.ed_threshold(scenario.ns, scenario.m, scenario.pfa_target)
    values.setdefault("MME", det.mme_threshold(scenario.ns, scenario.m, scenario.l, scenario.pfa_target, table))
    values.setdefault("EME", det.eme_threshold(scenario.ns, scenario.m, scenario.l, scenario.pfa_target))
    return values


def _stat_columns(scenario: Scenario, with_h0: bool, with_theo: bool) -> List[Tuple[str, Optional[float]]]:
    columns: List[Tuple[str, Optional[float]]] = []
    snrs: List[Optional[float]] = []
    if with_h0:
        snrs.append(None)
    if scenario.is_h1:
        snrs.extend(scenario.snr_grid_db)
    for snr in snrs:
        for spec in scenario.detectors:
            columns.append((spec.label, snr))
        if with_theo and snr is not None:
            kinds = {s.kind for s in scenario.detectors}
            if det.MME in kinds:
                columns.append(("MME-theo", snr))
            if det.EME in kinds:
                columns.append(("EME-theo", snr))
    return columns


def _collect_statistics(
    scenario: Scenario,
    with_h0: bool,
    with_theo: bool,
    workers: int,
) -> Tuple[List[Tuple[str, Optional[float]]], np.ndarray, Dict[str, float]]:
    from .rmt import default_table

    table = default_table()
    theo_ok = (
        with_theo
        and scenario.iq is None
        and scenario.signal is not None
        and scenario.signal.kind != "fm-microphone"
        and not scenario.receive_filter
    )
    columns = _stat_columns(scenario, with_h0, theo_ok)
    trials = list(range(scenario.trials))
    if workers <= 1 or scenario.trials < 4:
        stats = _run_trial_range((scenario, trials, columns, with_h0, theo_ok, table))
    else:
        chunks = np.array_split(trials, min(workers * 4, len(trials)))
        args = [(scenario, list(chunk), columns, with_h0, theo_ok, table) for chunk in chunks if len(chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_trial_range, args))
        stats = np.vstack(parts)
    return columns, stats, _thresholds(scenario, table)


def _aggregate(
    scenario: Scenario,
    columns: List[Tuple[str, Optional[float]]],
    stats: np.ndarray,
    thresholds: Dict[str, float],
) -> RunResult:
    cells = []
    for col, (label, snr) in enumerate(columns):
        values = stats[:, col]
        if label.endswith("-theo"):
            rate = float(np.mean(values))
            cells.append(RateCell(
                detector=label, snr_db=snr, threshold=thresholds[label.split("-")[0]],
                rate=rate, ci_low=rate, ci_high=rate,
                trials=scenario.trials, mean_statistic=float("nan"),
            ))
            continue
        thr = thresholds[label]
        hits = int(np.sum(values > thr))
        lo, hi = wilson_interval(hits, scenario.trials)
        cells.append(RateCell(
            detector=label, snr_db=snr, threshold=thr,
            rate=hits / scenario.trials, ci_low=lo, ci_high=hi,
            trials=scenario.trials, mean_statistic=float(np.mean(values)),
        ))
    return RunResult(
        scenario=scenario.name,
        config_hash=scenario.config_hash(),
        master_seed=scenario.master_seed,
        ns=scenario.ns,
        cells=tuple(cells),
    )


def run_scenario(scenario: Scenario, workers: int = 1) -> RunResult:
    """False-alarm rates for H0 scenarios, detection rates for H1 ones."""
    with_h0 = not scenario.is_h1
    columns, stats, thresholds = _collect_statistics(scenario, with_h0, False, workers)
    return _aggregate(scenario, columns, stats, thresholds)


def sweep_pd_vs_snr(scenario: Scenario, workers: int = 1) -> RunResult:
    """Detection probability across the SNR grid, with theoretical
    prediction curves alongside the empirical ones where the signal
    model supports them (iid sources through generated channels)."""
    if not scenario.is_h1:
        raise ConfigError("snr sweep requires a signal; use run_scenario for H0")
    columns, stats, thresholds = _collect_statistics(scenario, False, True, workers)
    return _aggregate(scenario, columns, stats, thresholds)


def roc_points(
    stats_h0: np.ndarray,
    stats_h1: np.ndarray,
    thresholds: np.ndarray,
) -> List[Tuple[float, float, float]]:
    """(threshold, pfa, pd) triples, one per threshold."""
    out = []
    for thr in thresholds:
        out.append((
            float(thr),
            float(np.mean(stats_h0 > thr)),
            float(np.mean(stats_h1 > thr)),
        ))
    return out


def _default_roc_grid(pooled: np.ndarray, points: int = 25) -> np.ndarray:
    qs = np.quantile(pooled, np.linspace(0.0, 1.0, points))
    lo = pooled.min()
    hi = pooled.max()
    span = max(hi - lo, 1e-12)
    grid = np.unique(np.concatenate([[lo - 0.05 * span], qs, [hi + 0.05 * span]]))
    return grid


def sweep_roc(
    scenario: Scenario,
    threshold_grid: Optional[Dict[str, np.ndarray]] = None,
    workers: int = 1,
) -> RunResult:
    """ROC sweep at a single SNR: every threshold yields one H0 cell
    (rate = Pfa) and one H1 cell (rate = Pd)."""
    if not scenario.is_h1:
        raise ConfigError("roc sweep requires a signal model")
    if len(scenario.snr_grid_db) != 1:
        raise ConfigError(f"roc sweep needs exactly one SNR, got {len(scenario.snr_grid_db)}")
    snr = scenario.snr_grid_db[0]
    columns, stats, thresholds = _collect_statistics(scenario, True, False, workers)

    col_index = {key: i for i, key in enumerate(columns)}
    cells = []
    for spec in scenario.detectors:
        h0 = stats[:, col_index[(spec.label, None)]]
        h1 = stats[:, col_index[(spec.label, snr)]]
        if threshold_grid is not None and spec.label in threshold_grid:
            grid = np.asarray(threshold_grid[spec.label], dtype=float)
        else:
            grid = _default_roc_grid(np.concatenate([h0, h1]))
        for thr, pfa, pd in roc_points(h0, h1, grid):
            lo0, hi0 = wilson_interval(int(round(pfa * scenario.trials)), scenario.trials)
            lo1, hi1 = wilson_interval(int(round(pd * scenario.trials)), scenario.trials)
            cells.append(RateCell(
                detector=spec.label, snr_db=None, threshold=thr, rate=pfa,
                ci_low=lo0, ci_high=hi0, trials=scenario.trials,
                mean_statistic=float(np.mean(h0)),
            ))
            cells.append(RateCell(
                detector=spec.label, snr_db=snr, threshold=thr, rate=pd,
                ci_low=lo1, ci_high=hi1, trials=scenario.trials,
                mean_statistic=float(np.mean(h1)),
            ))
    return RunResult(
        scenario=scenario.name,
        config_hash=scenario.config_hash(),
        master_seed=scenario.master_seed,
        ns=scenario.ns,
        cells=tuple(cells),
    )


def emit_csv(result: RunResult, path: Union[str, Path]) -> None:
    """Write the documented 10-column schema with stable formatting.

    The scenario column is ``name#confighash`` so a results file pins the
    exact configuration that produced it; the seed column completes the
    reproduction recipe.
    """
    lines = [",".join(CSV_COLUMNS)]
    tag = f"{result.scenario}#{result.config_hash}"
    for cell in result.cells:
        snr = "" if cell.snr_db is None else f"{cell.snr_db:.6g}"
        lines.append(",".join([
            tag,
            cell.detector,
            snr,
            str(result.ns),
            f"{cell.threshold:.10g}",
            f"{cell.rate:.6f}",
            f"{cell.ci_low:.6f}",
            f"{cell.ci_high:.6f}",
            str(cell.trials),
            str(result.master_seed),
        ]))
    Path(path).write_text("\n".join(lines) + "\n")
