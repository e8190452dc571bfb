"""Sample mixing operators.

The headline operator is :func:`tailored_mix`: amplitudes of the two
spectra are combined linearly while phases move from the anchor toward the
partner along the shortest angular path, with separate coefficients for
the two features. Summing phasors directly can cancel a bin outright when
the pair is near anti-phase; interpolating amplitude and phase separately
cannot, and guarantees A_mixed[k] >= lambda_a * A_anchor[k] on every bin.

The remaining operators are the common reference mixups (linear, binary
mask, weighted-geometric, cut-and-paste, amplitude-only, spectrogram
cut-and-paste), implemented with the exact parameter conventions used by
the coefficient profiles in :mod:`tsmix.policy`.

All operators are pure given their RNG argument; masks drawn once per call
are shared across channels, spectral paths run channel by channel.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    InvalidSpecError,
    LambdaOutOfRangeError,
    SampleRateMismatchError,
    ShapeMismatchError,
    SignalTooShortError,
    ZeroSignalError,
)
from .spectral import ZERO_POWER_FLOOR, Spectrum, TimeSeries, forward, inverse


@dataclass(frozen=True)
class MixCoefficients:
    """Amplitude/phase mixing weights, each in (0, 1], plus their origin.

    ``source`` records which sampling branch produced the pair ("close",
    "far", or "fixed" for explicitly chosen values).
    """

    lambda_a: float
    lambda_p: float
    source: str = "fixed"

    def __post_init__(self):
        for name, v in (("lambda_a", self.lambda_a), ("lambda_p", self.lambda_p)):
            if not (0.0 < v <= 1.0):
                raise LambdaOutOfRangeError(f"{name} must be in (0, 1], got {v}")


@dataclass(frozen=True)
class StftConfig:
    """Framing for the spectrogram mixer: non-overlapping rectangular frames.

    The transform length equals the signal length (frames are zero-padded),
    and hop equals the window, which keeps per-frame inversion exact.
    """

    fft_length: int
    window_length: int
    hop: int

    def __post_init__(self):
        if self.window_length < 1:
            raise InvalidSpecError("window_length must be >= 1")
        if self.hop != self.window_length:
            raise InvalidSpecError("hop must equal window_length (non-overlapping frames)")
        if self.fft_length < self.window_length:
            raise InvalidSpecError("fft_length must be >= window_length")

    @classmethod
    def for_length(cls, length: int) -> "StftConfig":
        """Transform length = signal length, window = hop = length // 4."""
        return cls(fft_length=length, window_length=length // 4, hop=length // 4)


def _check_pair(anchor: TimeSeries, other: TimeSeries) -> None:
    if anchor.data.shape != other.data.shape:
        raise ShapeMismatchError(
            f"anchor {anchor.data.shape} vs other {other.data.shape}"
        )
    if anchor.sample_rate_hz != other.sample_rate_hz:
        raise SampleRateMismatchError(
            f"{anchor.sample_rate_hz} Hz vs {other.sample_rate_hz} Hz"
        )


def _match_power(reference: TimeSeries, other: TimeSeries) -> TimeSeries:
    """Rescale ``other`` so its total energy equals the reference's."""
    p_ref = float(np.sum(reference.data**2))
    p_other = float(np.sum(other.data**2))
    if p_other < ZERO_POWER_FLOOR:
        raise ZeroSignalError("cannot power-normalize an all-zero partner")
    return TimeSeries(other.data * math.sqrt(p_ref / p_other), other.sample_rate_hz)


def _mix_polar(
    anchor: TimeSeries,
    other: TimeSeries,
    lambda_a: float,
    lambda_p: float,
    normalize_power: bool,
    phase_base_on_other: bool = False,
) -> TimeSeries:
    """Shared spectral path for tailored/amplitude/supervised mixing.

    Amplitude weight lambda_a always applies to the anchor. The phase walk
    starts from the anchor unless ``phase_base_on_other``. DC (and Nyquist,
    for even length) keep the phase base's values: they are sign bits of
    real bins, so interpolating them would break realness.
    """
    _check_pair(anchor, other)
    if normalize_power:
        other = _match_power(anchor, other)
    spec_a = forward(anchor)
    spec_o = forward(other)
    if phase_base_on_other:
        base, target = spec_o, spec_a
    else:
        base, target = spec_a, spec_o

    amp_flat, ph_flat = _kernels.polar_mix(
        np.ascontiguousarray(spec_a.amplitude.ravel()),
        np.ascontiguousarray(spec_o.amplitude.ravel()),
        np.ascontiguousarray(base.phase.ravel()),
        np.ascontiguousarray(target.phase.ravel()),
        float(lambda_a),
        float(lambda_p),
    )
    amp = amp_flat.reshape(spec_a.amplitude.shape)
    ph = ph_flat.reshape(spec_a.phase.shape)
    for k in spec_a._real_bins():
        ph[:, k] = base.phase[:, k]
    mixed = Spectrum(amp, ph, anchor.length, anchor.sample_rate_hz)
    return inverse(mixed)


def tailored_mix(
    anchor: TimeSeries,
    other: TimeSeries,
    coef: MixCoefficients,
    normalize_power: bool = True,
) -> TimeSeries:
    """Mix amplitude and phase separately; never cancels an anchor bin.

    With ``normalize_power`` (default) the partner is first rescaled to the
    anchor's total energy, which is the premise of the per-bin guarantee
    A_mixed[k] >= lambda_a * A_anchor[k].
    """
    return _mix_polar(anchor, other, coef.lambda_a, coef.lambda_p, normalize_power)


def amplitude_mix(
    anchor: TimeSeries,
    other: TimeSeries,
    lambda_a: float,
    normalize_power: bool = False,
) -> TimeSeries:
    """Blend amplitudes only; the anchor's phases are kept unchanged.

    Identical to :func:`tailored_mix` with lambda_p = 1 (given the same
    ``normalize_power``, which defaults off here for parity with the other
    reference mixups).
    """
    if not (0.0 < lambda_a <= 1.0):
        raise LambdaOutOfRangeError(f"lambda_a must be in (0, 1], got {lambda_a}")
    return _mix_polar(anchor, other, lambda_a, 1.0, normalize_power)


def supervised_mix(
    anchor: TimeSeries,
    other: TimeSeries,
    labels: tuple,
    coef: MixCoefficients,
    normalize_power: bool = False,
) -> tuple[TimeSeries, tuple[float, float]]:
    """Label-mixing variant: the phase walk starts from the dominant sample.

    When lambda_a >= 0.5 phases anchor on ``anchor`` exactly as in
    :func:`tailored_mix`; otherwise they anchor on ``other`` and walk toward
    the anchor (the angular distance is symmetric, only the starting point
    and direction swap). Returns the mixed signal and the label weights
    (lambda_a, 1 - lambda_a) for ``labels``; swapping the two inputs while
    replacing lambda_a by 1 - lambda_a yields the same signal with the
    weights swapped.
    """
    if len(labels) != 2:
        raise InvalidSpecError("labels must be a (anchor_label, other_label) pair")
    mixed = _mix_polar(
        anchor,
        other,
        coef.lambda_a,
        coef.lambda_p,
        normalize_power,
        phase_base_on_other=coef.lambda_a < 0.5,
    )
    return mixed, (coef.lambda_a, 1.0 - coef.lambda_a)


def linear_mix(anchor: TimeSeries, other: TimeSeries, lam: float) -> TimeSeries:
    """Elementwise convex combination lam*x + (1-lam)*x_other.

    Subject to destructive interference: an anti-phase partner with
    amplitude ratio lam/(1-lam) zeroes the shared frequency bin.
    """
    _check_pair(anchor, other)
    if not (0.0 <= lam <= 1.0):
        raise LambdaOutOfRangeError(f"lam must be in [0, 1], got {lam}")
    return TimeSeries(lam * anchor.data + (1.0 - lam) * other.data, anchor.sample_rate_hz)


def binary_mix(
    anchor: TimeSeries,
    other: TimeSeries,
    rho_range: tuple[float, float],
    rng: np.random.Generator,
) -> TimeSeries:
    """Per-sample Bernoulli swap: keep each time step from the anchor with
    probability rho, drawn once per call from U(rho_range). The keep mask is
    shared across channels."""
    _check_pair(anchor, other)
    lo, hi = rho_range
    if not (0.0 <= lo <= hi <= 1.0):
        raise InvalidSpecError(f"rho_range must satisfy 0 <= lo <= hi <= 1, got {rho_range}")
    rho = rng.uniform(lo, hi)
    keep = rng.random(anchor.length) < rho
    return TimeSeries(np.where(keep, anchor.data, other.data), anchor.sample_rate_hz)


def geometric_mix(
    anchor: TimeSeries,
    other: TimeSeries,
    lam: float,
    eps_floor: float = 1e-8,
) -> TimeSeries:
    """Weighted geometric mean of magnitudes, carrying the anchor's sign.

    Raw signals take negative values, so magnitudes are floored at
    ``eps_floor`` before exponentiation and the anchor's sign is re-applied.
    """
    _check_pair(anchor, other)
    if not (0.0 < lam <= 1.0):
        raise LambdaOutOfRangeError(f"lam must be in (0, 1], got {lam}")
    mag_a = np.maximum(np.abs(anchor.data), eps_floor)
    mag_o = np.maximum(np.abs(other.data), eps_floor)
    mixed = np.sign(anchor.data) * mag_a**lam * mag_o ** (1.0 - lam)
    return TimeSeries(mixed, anchor.sample_rate_hz)


def rectangle_keep_mask(length: int, start_frac: float, length_frac: float) -> np.ndarray:
    """Boolean keep-mask with one contiguous False run.

    The run covers round(length_frac * length) samples and starts at
    round(start_frac * (length - run)), so it stays in bounds for any
    start_frac in [0, 1].
    """
    if not (0.0 <= start_frac <= 1.0 and 0.0 <= length_frac <= 1.0):
        raise InvalidSpecError(
            f"mask fractions must be in [0, 1], got start={start_frac}, length={length_frac}"
        )
    run = int(round(length_frac * length))
    start = int(round(start_frac * (length - run)))
    keep = np.ones(length, dtype=bool)
    keep[start : start + run] = False
    return keep


def cut_mix(
    anchor: TimeSeries,
    other: TimeSeries,
    b_range: tuple[float, float],
    a_range: tuple[float, float],
    rng: np.random.Generator,
) -> TimeSeries:
    """Replace one contiguous stretch of the anchor with the partner.

    Start fraction b ~ U(b_range) and length fraction a ~ U(a_range), drawn
    in that order; the same section is replaced in every channel.
    """
    _check_pair(anchor, other)
    for name, (lo, hi) in (("b_range", b_range), ("a_range", a_range)):
        if not (0.0 <= lo <= hi <= 1.0):
            raise InvalidSpecError(f"{name} must satisfy 0 <= lo <= hi <= 1, got {(lo, hi)}")
    b = rng.uniform(*b_range)
    a = rng.uniform(*a_range)
    keep = rectangle_keep_mask(anchor.length, b, a)
    return TimeSeries(np.where(keep, anchor.data, other.data), anchor.sample_rate_hz)


def _frame_bounds(length: int, window: int) -> list[tuple[int, int]]:
    return [(s, min(s + window, length)) for s in range(0, length, window)]


def _stft_frames(data: np.ndarray, cfg: StftConfig) -> list[np.ndarray]:
    frames = []
    for s, e in _frame_bounds(data.shape[1], cfg.window_length):
        padded = np.zeros((data.shape[0], cfg.fft_length))
        padded[:, : e - s] = data[:, s:e]
        frames.append(np.fft.rfft(padded, axis=1))
    return frames


def spec_mix(
    anchor: TimeSeries,
    other: TimeSeries,
    b_range: tuple[float, float],
    a_range: tuple[float, float],
    rng: np.random.Generator,
    cfg: StftConfig | None = None,
) -> TimeSeries:
    """Cut-and-paste on the short-time spectrum along the frame axis.

    Both signals are framed identically (rectangular window, zero-padded to
    the transform length); a contiguous block of the anchor's frames is
    replaced by the partner's, then each frame is inverted and cropped back
    to its window. With hop = window this framing is exactly invertible, so
    an empty block reproduces the anchor to rounding precision.
    """
    _check_pair(anchor, other)
    if anchor.length < 8:
        raise SignalTooShortError(f"length {anchor.length} < 8")
    if cfg is None:
        cfg = StftConfig.for_length(anchor.length)
    for name, (lo, hi) in (("b_range", b_range), ("a_range", a_range)):
        if not (0.0 <= lo <= hi <= 1.0):
            raise InvalidSpecError(f"{name} must satisfy 0 <= lo <= hi <= 1, got {(lo, hi)}")

    bounds = _frame_bounds(anchor.length, cfg.window_length)
    frames_a = _stft_frames(anchor.data, cfg)
    frames_o = _stft_frames(other.data, cfg)

    b = rng.uniform(*b_range)
    a = rng.uniform(*a_range)
    n_frames = len(bounds)
    run = int(round(a * n_frames))
    start = int(round(b * (n_frames - run)))

    out = np.empty_like(anchor.data)
    for i, (s, e) in enumerate(bounds):
        frame = frames_o[i] if start <= i < start + run else frames_a[i]
        out[:, s:e] = np.fft.irfft(frame, n=cfg.fft_length, axis=1)[:, : e - s]
    return TimeSeries(out, anchor.sample_rate_hz)
