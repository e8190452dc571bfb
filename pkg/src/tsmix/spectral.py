"""Real-signal spectra: forward/inverse transforms, power, band power.

Conventions, fixed across the package:

* one-sided (half-complex) storage: bins 0..floor(L/2); the negative
  frequencies are implied by Hermitian symmetry, so inverse transforms are
  real by construction;
* unnormalized forward transform, 1/L on the inverse;
* phases in radians in (-pi, pi]; the DC bin and (for even length) the
  Nyquist bin are real-valued, so their phases are projected onto {0, pi};
* finite-sample power spectrum S[k] = |X_k|^2 / L, with interior bins
  weighted twice wherever a two-sided total is needed (Parseval then reads
  sum(w * S) == sum(x**2)).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    BandOutOfRangeError,
    InvalidSpecError,
    NonFiniteError,
    ShapeMismatchError,
    TooShortError,
    ZeroSignalError,
)

MIN_LENGTH = 4
ZERO_POWER_FLOOR = 1e-30


@dataclass(frozen=True)
class TimeSeries:
    """Real multichannel signal, shape [channels, length], with sample rate."""

    data: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        if arr.ndim != 2:
            raise ShapeMismatchError(f"signal must be 1-D or 2-D, got ndim={arr.ndim}")
        if arr.shape[1] < MIN_LENGTH:
            raise TooShortError(f"length {arr.shape[1]} < minimum {MIN_LENGTH}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("signal contains NaN or Inf")
        if not (np.isfinite(self.sample_rate_hz) and self.sample_rate_hz > 0):
            raise InvalidSpecError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "data", arr)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def length(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.length / self.sample_rate_hz


@dataclass(frozen=True)
class Spectrum:
    """One-sided spectrum stored as (amplitude, phase) arrays.

    amplitude[c][k] >= 0 and phase values lie in (-pi, pi]; DC/Nyquist
    phases are 0 or pi exactly (those bins are real).
    """

    amplitude: np.ndarray
    phase: np.ndarray
    original_length: int
    sample_rate_hz: float

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=np.float64)
        ph = np.asarray(self.phase, dtype=np.float64)
        if amp.ndim == 1:
            amp = amp[np.newaxis, :]
        if ph.ndim == 1:
            ph = ph[np.newaxis, :]
        if amp.shape != ph.shape:
            raise ShapeMismatchError(f"amplitude {amp.shape} vs phase {ph.shape}")
        n_bins = self.original_length // 2 + 1
        if amp.ndim != 2 or amp.shape[1] != n_bins:
            raise ShapeMismatchError(
                f"expected [channels, {n_bins}] bins for length {self.original_length}, got {amp.shape}"
            )
        if np.any(amp < 0):
            raise InvalidSpecError("amplitudes must be nonnegative")
        if np.any(ph <= -np.pi) or np.any(ph > np.pi):
            raise InvalidSpecError("phases must lie in (-pi, pi]")
        for k in self._real_bins():
            bad = ~((ph[:, k] == 0.0) | (ph[:, k] == np.pi))
            if np.any(bad):
                raise InvalidSpecError(f"phase of real-valued bin {k} must be 0 or pi")
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", ph)

    def _real_bins(self) -> tuple[int, ...]:
        if self.original_length % 2 == 0:
            return (0, self.n_bins - 1)
        return (0,)

    @property
    def channels(self) -> int:
        return self.amplitude.shape[0]

    @property
    def n_bins(self) -> int:
        return self.amplitude.shape[1]

    @property
    def frequencies_hz(self) -> np.ndarray:
        """Center frequency of each bin: k * fs / L."""
        return np.arange(self.n_bins) * (self.sample_rate_hz / self.original_length)


@dataclass(frozen=True)
class BandSpec:
    """Frequency band of interest [f_lo_hz, f_hi_hz), in Hz."""

    f_lo_hz: float
    f_hi_hz: float

    def __post_init__(self):
        if not (np.isfinite(self.f_lo_hz) and np.isfinite(self.f_hi_hz)):
            raise InvalidSpecError("band edges must be finite")
        if self.f_lo_hz < 0:
            raise InvalidSpecError(f"f_lo_hz must be >= 0, got {self.f_lo_hz}")
        if self.f_hi_hz <= self.f_lo_hz:
            raise InvalidSpecError(f"f_hi_hz must exceed f_lo_hz, got [{self.f_lo_hz}, {self.f_hi_hz}]")


def _checked_data(signal: TimeSeries) -> np.ndarray:
    data = signal.data
    if data.shape[1] < MIN_LENGTH:
        raise TooShortError(f"length {data.shape[1]} < minimum {MIN_LENGTH}")
    if not np.all(np.isfinite(data)):
        raise NonFiniteError("signal contains NaN or Inf")
    return data


def forward(signal: TimeSeries) -> Spectrum:
    """One-sided transform with amplitude/phase decomposition.

    Unnormalized: a constant signal of value v and length L yields a DC
    amplitude of v*L. DC and Nyquist phases are projected to {0, pi}
    according to the sign of the (real) bin value.
    """
    data = _checked_data(signal)
    spec = np.fft.rfft(data, axis=1)
    amplitude = np.abs(spec)
    phase = np.arctan2(spec.imag, spec.real)
    # arctan2 can return -pi (when imag is -0.0); fold onto +pi
    phase[phase == -np.pi] = np.pi

    real_bins = [0] + ([amplitude.shape[1] - 1] if signal.length % 2 == 0 else [])
    for k in real_bins:
        phase[:, k] = np.where(spec[:, k].real < 0, np.pi, 0.0)
    return Spectrum(amplitude, phase, signal.length, signal.sample_rate_hz)


def inverse(spectrum: Spectrum) -> TimeSeries:
    """Real signal of the original length; inverse of :func:`forward`.

    Realness holds by construction: the one-sided bins are expanded under
    Hermitian symmetry, never by discarding an imaginary residue.
    """
    if spectrum.amplitude.shape != spectrum.phase.shape:
        raise ShapeMismatchError(
            f"amplitude {spectrum.amplitude.shape} vs phase {spectrum.phase.shape}"
        )
    bins = spectrum.amplitude * np.exp(1j * spectrum.phase)
    # real-valued bins: drop the rounding-level imaginary part of amp*e^{i*pi}
    for k in spectrum._real_bins():
        bins[:, k] = bins[:, k].real
    data = np.fft.irfft(bins, n=spectrum.original_length, axis=1)
    return TimeSeries(data, spectrum.sample_rate_hz)


def power_spectrum(signal: TimeSeries) -> np.ndarray:
    """Finite-sample power estimate S[k] = |X_k|^2 / L, per channel."""
    spec = forward(signal)
    return spec.amplitude**2 / signal.length


def two_sided_weights(length: int) -> np.ndarray:
    """Multiplicity of each one-sided bin in the two-sided spectrum."""
    n_bins = length // 2 + 1
    w = np.full(n_bins, 2.0)
    w[0] = 1.0
    if length % 2 == 0:
        w[-1] = 1.0
    return w


def band_mask(length: int, sample_rate_hz: float, band: BandSpec) -> np.ndarray:
    """Boolean mask of one-sided bins whose center frequency is in the band.

    Membership is half-open [f_lo, f_hi) by bin-center frequency.
    """
    if band.f_hi_hz > sample_rate_hz / 2:
        raise BandOutOfRangeError(
            f"band upper edge {band.f_hi_hz} Hz exceeds Nyquist {sample_rate_hz / 2} Hz"
        )
    freqs = np.arange(length // 2 + 1) * (sample_rate_hz / length)
    return (freqs >= band.f_lo_hz) & (freqs < band.f_hi_hz)


def band_power(signal: TimeSeries, band: BandSpec) -> float:
    """Two-sided power in the band, summed over channels."""
    s = power_spectrum(signal)
    w = two_sided_weights(signal.length)
    mask = band_mask(signal.length, signal.sample_rate_hz, band)
    return float(np.sum(s[:, mask] * w[mask]))


def total_power(signal: TimeSeries) -> float:
    """Total two-sided spectral power, summed over channels.

    Equals sum(x**2) by Parseval, up to rounding.
    """
    s = power_spectrum(signal)
    w = two_sided_weights(signal.length)
    return float(np.sum(s * w))


def band_power_ratio(signal: TimeSeries, band: BandSpec) -> float:
    """Fraction of the signal's power inside the band, in [0, 1]."""
    s = power_spectrum(signal)
    w = two_sided_weights(signal.length)
    total = float(np.sum(s * w))
    if total < ZERO_POWER_FLOOR:
        raise ZeroSignalError(f"total power {total} below {ZERO_POWER_FLOOR}")
    mask = band_mask(signal.length, signal.sample_rate_hz, band)
    return float(np.sum(s[:, mask] * w[mask]) / total)
