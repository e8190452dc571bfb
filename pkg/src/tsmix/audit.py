"""Executable checks of the mixing guarantees.

What is audited is band power, never information content directly: the
working hypothesis is that a task's signal lives in a band of interest and
the label information of a sample scales with its normalized power there.
Every number these functions emit is a power (or power ratio) under that
proxy; do not read them as mutual-information estimates.

Two instruments:

* :func:`audit_mix` measures one mixed sample against the per-bin
  guarantee A_mixed[k] >= lambda_a * A_anchor[k] and reports in-band powers.
* :func:`destruction_sweep` maps out where elementwise mixing destroys the
  band (anti-phase partner, amplitude ratio near lam/(1-lam)) and shows the
  amplitude/phase-separated mix holding its floor on the same grid.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidGridError, ShapeMismatchError, ZeroSignalError
from .mixing import MixCoefficients, linear_mix, tailored_mix
from .spectral import (
    ZERO_POWER_FLOOR,
    BandSpec,
    Spectrum,
    TimeSeries,
    band_power,
    forward,
    inverse,
)

POINTWISE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MixAudit:
    """Band powers of the three signals plus the per-bin bound margin.

    ``min_bound_margin`` is min over channels and bins of
    A_mixed[k] - lambda_a * A_anchor[k]; the bound holds when it is no
    lower than -1e-9.
    """

    anchor_band_power: float
    other_band_power: float
    mixed_band_power: float
    pointwise_bound_ok: bool
    min_bound_margin: float


def audit_mix(
    anchor: TimeSeries,
    other: TimeSeries,
    mixed: TimeSeries,
    coef: MixCoefficients,
    band: BandSpec,
) -> MixAudit:
    """Measure a mixed sample against the anchor's per-bin amplitude floor.

    The floor is guaranteed for power-normalized amplitude/phase-separated
    mixing; for other mixers this simply reports how badly it is violated.
    """
    if anchor.data.shape != other.data.shape or anchor.data.shape != mixed.data.shape:
        raise ShapeMismatchError(
            f"anchor {anchor.data.shape}, other {other.data.shape}, mixed {mixed.data.shape}"
        )
    amp_anchor = forward(anchor).amplitude
    amp_mixed = forward(mixed).amplitude
    margin = float(np.min(amp_mixed - coef.lambda_a * amp_anchor))
    return MixAudit(
        anchor_band_power=band_power(anchor, band),
        other_band_power=band_power(other, band),
        mixed_band_power=band_power(mixed, band),
        pointwise_bound_ok=margin >= -POINTWISE_TOLERANCE,
        min_bound_margin=margin,
    )


@dataclass(frozen=True)
class SweepPoint:
    """One sweep cell: mixed in-band power relative to the anchor's."""

    phase_offset: float
    amp_ratio: float
    lam: float
    method: str
    band_power_ratio: float


def _phase_shifted_partner(anchor: TimeSeries, offset: float, ratio: float) -> TimeSeries:
    """Partner with every interior bin scaled by ratio and rotated by -offset."""
    spec = forward(anchor)
    amp = ratio * spec.amplitude
    shifted = spec.phase - offset
    two_pi = 2 * np.pi
    wrapped = np.where(
        shifted > np.pi, shifted - two_pi, np.where(shifted <= -np.pi, shifted + two_pi, shifted)
    )
    for k in spec._real_bins():
        wrapped[:, k] = spec.phase[:, k]
    return inverse(Spectrum(amp, wrapped, anchor.length, anchor.sample_rate_hz))


def destruction_sweep(
    anchor: TimeSeries,
    phase_offsets: np.ndarray,
    amplitude_ratios: np.ndarray,
    lambdas: np.ndarray,
    band: BandSpec,
) -> list[SweepPoint]:
    """Evaluate elementwise vs amplitude/phase-separated mixing on a grid.

    For each (offset, ratio) the partner is the anchor with all interior
    bins scaled by the ratio and phase-shifted by the offset. Each cell
    reports band_power(mixed) / band_power(anchor); near offset pi with
    ratio lam/(1-lam) the elementwise rows collapse toward zero while the
    separated rows stay above lam**2.
    """
    offsets = np.atleast_1d(np.asarray(phase_offsets, dtype=np.float64))
    ratios = np.atleast_1d(np.asarray(amplitude_ratios, dtype=np.float64))
    lams = np.atleast_1d(np.asarray(lambdas, dtype=np.float64))
    if offsets.size == 0 or ratios.size == 0 or lams.size == 0:
        raise InvalidGridError("sweep grid axes must be nonempty")
    if np.any(offsets <= -np.pi) or np.any(offsets > np.pi):
        raise InvalidGridError("phase offsets must lie in (-pi, pi]")
    if np.any(ratios <= 0):
        raise InvalidGridError("amplitude ratios must be positive")
    if np.any(lams <= 0) or np.any(lams > 1):
        raise InvalidGridError("lambdas must lie in (0, 1]")

    reference = band_power(anchor, band)
    if reference < ZERO_POWER_FLOOR:
        raise ZeroSignalError("anchor has no power in the sweep band")

    points = []
    for offset in offsets:
        for ratio in ratios:
            partner = _phase_shifted_partner(anchor, float(offset), float(ratio))
            for lam in lams:
                lin = linear_mix(anchor, partner, float(lam))
                tai = tailored_mix(
                    anchor, partner, MixCoefficients(float(lam), float(lam), "fixed")
                )
                for method, mixed in (("linear", lin), ("tailored", tai)):
                    points.append(
                        SweepPoint(
                            phase_offset=float(offset),
                            amp_ratio=float(ratio),
                            lam=float(lam),
                            method=method,
                            band_power_ratio=band_power(mixed, band) / reference,
                        )
                    )
    return points


def write_sweep_csv(points: list[SweepPoint], path) -> None:
    """Emit sweep cells as CSV with the stable column order."""
    lines = ["phase_offset,amp_ratio,lambda,method,band_power_ratio"]
    for p in points:
        lines.append(
            f"{p.phase_offset!r},{p.amp_ratio!r},{p.lam!r},{p.method},{p.band_power_ratio!r}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
