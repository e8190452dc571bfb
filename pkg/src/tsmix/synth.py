"""Synthetic quasi-periodic signals and worst-case cancellation pairs.

The labeled generator ties each class to a frequency band: samples are
harmonic stacks whose fundamental sits on a DFT bin inside the class band,
optionally drifting slowly in frequency and phase (periodic at small
scale, unpredictable across the window) with additive white noise. Band
power over the class bands is then an oracle for the label.

The adversarial constructor builds the pair that defeats elementwise
mixing: a partner at the same frequency, anti-phase, with amplitude ratio
lam/(1-lam), so the convex combination cancels the bin outright.
"""

from dataclasses import dataclass

import numpy as np

from .datasets import LabeledDataset
from .errors import FrequencyNotOnBinError, InvalidSpecError
from .spectral import MIN_LENGTH, BandSpec, TimeSeries


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of the labeled generator (one band per class)."""

    n_classes: int
    class_bands: tuple[BandSpec, ...]
    length: int
    sample_rate_hz: float
    n_harmonics: int = 1
    freq_jitter: float = 0.0  # fractional drift amplitude of the fundamental
    phase_jitter: float = 0.0  # radians of slow phase modulation
    noise_sigma: float = 0.0
    n_channels: int = 1

    def __post_init__(self):
        object.__setattr__(self, "class_bands", tuple(self.class_bands))
        if self.n_classes < 2:
            raise InvalidSpecError(f"n_classes must be >= 2, got {self.n_classes}")
        if len(self.class_bands) != self.n_classes:
            raise InvalidSpecError(
                f"{len(self.class_bands)} bands for {self.n_classes} classes"
            )
        if self.length < MIN_LENGTH:
            raise InvalidSpecError(f"length must be >= {MIN_LENGTH}, got {self.length}")
        if self.sample_rate_hz <= 0:
            raise InvalidSpecError("sample rate must be positive")
        nyquist = self.sample_rate_hz / 2
        ordered = sorted(self.class_bands, key=lambda b: b.f_lo_hz)
        for lo_band, hi_band in zip(ordered, ordered[1:]):
            if hi_band.f_lo_hz < lo_band.f_hi_hz:
                raise InvalidSpecError("class bands must be disjoint")
        for band in self.class_bands:
            if band.f_hi_hz > nyquist:
                raise InvalidSpecError(f"band {band} exceeds Nyquist {nyquist} Hz")
        if self.n_harmonics < 1:
            raise InvalidSpecError("n_harmonics must be >= 1")
        if self.freq_jitter < 0 or self.phase_jitter < 0 or self.noise_sigma < 0:
            raise InvalidSpecError("jitter and noise parameters must be >= 0")
        if self.n_channels < 1:
            raise InvalidSpecError("n_channels must be >= 1")


@dataclass(frozen=True)
class AdversarialPairSpec:
    """Cancellation target: mixing weight, band, and on-bin frequency."""

    lambda_target: float
    band: BandSpec
    base_freq_hz: float

    def __post_init__(self):
        if not (0.0 < self.lambda_target < 1.0):
            raise InvalidSpecError(
                f"lambda_target must be in (0, 1) strictly, got {self.lambda_target}"
            )
        if not (self.band.f_lo_hz <= self.base_freq_hz < self.band.f_hi_hz):
            raise InvalidSpecError(
                f"base frequency {self.base_freq_hz} Hz outside band "
                f"[{self.band.f_lo_hz}, {self.band.f_hi_hz})"
            )


def _bins_in_band(band: BandSpec, length: int, sample_rate_hz: float) -> np.ndarray:
    freqs = np.arange(length // 2 + 1) * (sample_rate_hz / length)
    bins = np.flatnonzero((freqs >= band.f_lo_hz) & (freqs < band.f_hi_hz))
    return bins[bins > 0]  # never put a fundamental on DC


def generate_labeled(
    spec: SynthSpec, n_per_class: int, rng: np.random.Generator
) -> LabeledDataset:
    """Class-balanced dataset of drifting harmonic stacks plus noise.

    Fundamentals are drawn from the DFT bins inside the class band (exact
    bins, so zero jitter and zero noise give leakage-free in-band tones);
    harmonic m carries amplitude 1/m^2 and harmonics beyond Nyquist are
    dropped. One frequency/phase drift trajectory is shared by the
    harmonics of a sample, keeping the waveform coherent.
    """
    if n_per_class < 1:
        raise InvalidSpecError("n_per_class must be >= 1")
    t = np.arange(spec.length) / spec.sample_rate_hz
    duration = spec.length / spec.sample_rate_hz
    nyquist = spec.sample_rate_hz / 2

    samples: list[TimeSeries] = []
    labels: list[int] = []
    for cls in range(spec.n_classes):
        band = spec.class_bands[cls]
        bins = _bins_in_band(band, spec.length, spec.sample_rate_hz)
        if bins.size == 0:
            raise InvalidSpecError(
                f"class {cls}: no DFT bin inside [{band.f_lo_hz}, {band.f_hi_hz}) Hz "
                f"at length {spec.length}"
            )
        for _ in range(n_per_class):
            f0 = rng.choice(bins) * (spec.sample_rate_hz / spec.length)
            # slow modulators: at most ~2 cycles across the window
            fm_rate = rng.uniform(0.5, 2.0) / duration
            fm_phase = rng.uniform(-np.pi, np.pi)
            pm_rate = rng.uniform(0.5, 2.0) / duration
            pm_phase = rng.uniform(-np.pi, np.pi)
            freq_wobble = np.sin(2 * np.pi * fm_rate * t + fm_phase)
            phase_wobble = spec.phase_jitter * np.sin(2 * np.pi * pm_rate * t + pm_phase)

            data = np.zeros((spec.n_channels, spec.length))
            for c in range(spec.n_channels):
                for m in range(1, spec.n_harmonics + 1):
                    if m * f0 > nyquist:
                        break
                    base_phase = rng.uniform(-np.pi, np.pi)
                    angle = (
                        2 * np.pi * m * f0 * t
                        + (m * f0 * spec.freq_jitter / fm_rate) * freq_wobble
                        + phase_wobble
                        + base_phase
                    )
                    data[c] += np.sin(angle) / m**2
            if spec.noise_sigma > 0:
                data += spec.noise_sigma * rng.standard_normal(data.shape)
            samples.append(TimeSeries(data, spec.sample_rate_hz))
            labels.append(cls)
    return LabeledDataset(samples, np.array(labels))


def adversarial_pair(
    spec: AdversarialPairSpec,
    length: int,
    sample_rate_hz: float,
    rng: np.random.Generator | None = None,
) -> tuple[TimeSeries, TimeSeries]:
    """Unit sinusoid plus its exact cancellation partner.

    The partner is the same sinusoid scaled by lam/(1-lam) and shifted by
    pi, so ``linear_mix(anchor, other, lam)`` annihilates the bin. The
    frequency must land exactly on a DFT bin; off-bin leakage would smear
    the cancellation. The anchor's starting phase is drawn from ``rng``
    (0 when no rng is given).
    """
    k = spec.base_freq_hz * length / sample_rate_hz
    if abs(k - round(k)) > 1e-9:
        raise FrequencyNotOnBinError(
            f"{spec.base_freq_hz} Hz is {k:.6f} bins at length {length}; must be integral"
        )
    if not (0 < round(k) < length / 2):
        raise InvalidSpecError(f"bin {round(k)} must be strictly between DC and Nyquist")
    phase0 = 0.0 if rng is None else float(rng.uniform(-np.pi, np.pi))
    t = np.arange(length) / sample_rate_hz
    waveform = np.cos(2 * np.pi * spec.base_freq_hz * t + phase0)
    ratio = spec.lambda_target / (1.0 - spec.lambda_target)
    anchor = TimeSeries(waveform, sample_rate_hz)
    # cos(x + pi) == -cos(x), applied exactly so the cancellation is too
    other = TimeSeries(-ratio * waveform, sample_rate_hz)
    return anchor, other
