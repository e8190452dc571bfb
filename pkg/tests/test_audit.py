"""Bound audits and the destructive-interference sweep."""

import numpy as np
import pytest

from tsmix import (
    AdversarialPairSpec,
    BandSpec,
    MixCoefficients,
    adversarial_pair,
    audit_mix,
    destruction_sweep,
    linear_mix,
    tailored_mix,
    write_sweep_csv,
)
from tsmix.errors import InvalidGridError, ShapeMismatchError

from conftest import make_tone, random_signal

BAND = BandSpec(3.0, 5.0)


class TestAuditMix:
    def test_tailored_output_respects_bound(self, rng):
        for _ in range(50):
            anchor = random_signal(rng, length=64, channels=2)
            other = random_signal(rng, length=64, channels=2)
            coef = MixCoefficients(float(rng.uniform(0.05, 1.0)), float(rng.uniform(0.05, 1.0)))
            mixed = tailored_mix(anchor, other, coef)
            audit = audit_mix(anchor, other, mixed, coef, BandSpec(2.0, 9.0))
            assert audit.pointwise_bound_ok
            assert audit.min_bound_margin >= -1e-9

    def test_linear_mix_on_adversarial_pair_collapses(self):
        spec = AdversarialPairSpec(0.9, BAND, 4.0)
        anchor, other = adversarial_pair(spec, 256, 32.0)
        mixed = linear_mix(anchor, other, 0.9)
        audit = audit_mix(anchor, other, mixed, MixCoefficients(0.9, 0.9), BAND)
        assert audit.mixed_band_power < 1e-10 * audit.anchor_band_power
        assert not audit.pointwise_bound_ok

    def test_self_mix_preserves_band_power(self, rng):
        anchor = make_tone(4.0, 32.0, 128)
        mixed = tailored_mix(anchor, anchor, MixCoefficients(0.42, 0.77))
        audit = audit_mix(anchor, anchor, mixed, MixCoefficients(0.42, 0.77), BAND)
        assert audit.mixed_band_power == pytest.approx(audit.anchor_band_power, rel=1e-6)

    def test_shape_mismatch(self, rng):
        a = random_signal(rng, length=32)
        b = random_signal(rng, length=48)
        with pytest.raises(ShapeMismatchError):
            audit_mix(a, b, a, MixCoefficients(0.9, 0.9), BAND)

    def test_band_power_corollary(self, rng):
        # in-band power of the mix is at least lam_a**2 of the anchor's
        for _ in range(25):
            anchor = random_signal(rng, length=64)
            other = random_signal(rng, length=64)
            lam = float(rng.uniform(0.1, 1.0))
            mixed = tailored_mix(anchor, other, MixCoefficients(lam, float(rng.uniform(0.1, 1.0))))
            audit = audit_mix(anchor, other, mixed, MixCoefficients(lam, lam), BandSpec(2.0, 9.0))
            assert audit.mixed_band_power >= lam**2 * audit.anchor_band_power - 1e-9


class TestDestructionSweep:
    def setup_method(self):
        self.anchor = make_tone(4.0, 32.0, 256)

    def test_zero_offset_retains_band(self):
        points = destruction_sweep(self.anchor, [0.1e-15], [1.0, 3.0], [0.5, 0.9], BAND)
        for p in points:
            assert p.band_power_ratio >= 1.0 - 1e-9

    def test_cancellation_cell(self):
        lam = 0.9
        ratio = lam / (1 - lam)
        points = destruction_sweep(self.anchor, [np.pi], [ratio], [lam], BAND)
        by_method = {p.method: p for p in points}
        assert by_method["linear"].band_power_ratio < 1e-6
        assert by_method["tailored"].band_power_ratio >= lam**2 - 1e-9

    def test_tailored_floor_holds_everywhere(self):
        offsets = np.linspace(-np.pi + 0.1, np.pi, 7)
        points = destruction_sweep(self.anchor, offsets, [0.5, 1.0, 9.0], [0.6, 0.9], BAND)
        for p in points:
            if p.method == "tailored":
                assert p.band_power_ratio >= p.lam**2 - 1e-9

    def test_linear_monotone_in_offset_magnitude(self):
        # |lam + (1-lam) r e^{j theta}|^2 decreases as |theta| grows at r = lam/(1-lam)
        lam = 0.8
        ratio = lam / (1 - lam)
        offsets = np.linspace(0.1, np.pi, 8)
        points = destruction_sweep(self.anchor, offsets, [ratio], [lam], BAND)
        linear = [p.band_power_ratio for p in points if p.method == "linear"]
        for a, b in zip(linear[1:], linear[:-1]):
            assert a <= b + 1e-12

    def test_symmetric_in_offset_sign(self):
        for offset in (0.4, 1.1, 2.5):
            pos = destruction_sweep(self.anchor, [offset], [2.0], [0.7], BAND)
            neg = destruction_sweep(self.anchor, [-offset], [2.0], [0.7], BAND)
            for p, n in zip(pos, neg):
                assert p.band_power_ratio == pytest.approx(n.band_power_ratio, rel=1e-9)

    def test_grid_validation(self):
        with pytest.raises(InvalidGridError):
            destruction_sweep(self.anchor, [], [1.0], [0.5], BAND)
        with pytest.raises(InvalidGridError):
            destruction_sweep(self.anchor, [4.0], [1.0], [0.5], BAND)
        with pytest.raises(InvalidGridError):
            destruction_sweep(self.anchor, [0.5], [-1.0], [0.5], BAND)
        with pytest.raises(InvalidGridError):
            destruction_sweep(self.anchor, [0.5], [1.0], [1.5], BAND)

    def test_csv_emission(self, tmp_path):
        points = destruction_sweep(self.anchor, [np.pi], [9.0], [0.9], BAND)
        path = tmp_path / "sweep.csv"
        write_sweep_csv(points, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "phase_offset,amp_ratio,lambda,method,band_power_ratio"
        assert len(lines) == 1 + len(points)
