"""Mixing operators: tailored, supervised, and the reference baselines."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsmix import (
    MixCoefficients,
    StftConfig,
    TimeSeries,
    amplitude_mix,
    binary_mix,
    cut_mix,
    forward,
    geometric_mix,
    linear_mix,
    rectangle_keep_mask,
    spec_mix,
    supervised_mix,
    tailored_mix,
)
from tsmix.errors import (
    InvalidSpecError,
    LambdaOutOfRangeError,
    SampleRateMismatchError,
    ShapeMismatchError,
    SignalTooShortError,
)

from conftest import make_tone, random_signal


def roundtrip_close(a: TimeSeries, b: TimeSeries, rel=1e-9):
    scale = max(np.max(np.abs(a.data)), 1e-12)
    return np.max(np.abs(a.data - b.data)) < rel * scale


class TestMixCoefficients:
    @pytest.mark.parametrize("bad", [0.0, -0.2, 1.0001])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(LambdaOutOfRangeError):
            MixCoefficients(bad, 0.5)
        with pytest.raises(LambdaOutOfRangeError):
            MixCoefficients(0.5, bad)


class TestTailoredMix:
    def test_identity_coefficients(self, rng):
        anchor = random_signal(rng, length=64, channels=2)
        other = random_signal(rng, length=64, channels=2)
        out = tailored_mix(anchor, other, MixCoefficients(1.0, 1.0))
        assert roundtrip_close(out, anchor)

    def test_self_mix_fixed_point(self, rng):
        anchor = random_signal(rng, length=50)
        for lam_a, lam_p in [(0.3, 0.7), (0.9, 0.1), (0.5, 0.5)]:
            out = tailored_mix(anchor, anchor, MixCoefficients(lam_a, lam_p))
            assert roundtrip_close(out, anchor, rel=1e-8)

    def test_antiphase_pair_keeps_the_bin(self):
        # closed form: equal unit phasors at 0 and pi, lambda = 0.5 ->
        # amplitude stays 1 and the phase lands midway at -pi/2
        n, fs, f = 64, 32.0, 4.0
        anchor = make_tone(f, fs, n, phase=0.0)
        other = make_tone(f, fs, n, phase=np.pi)
        mixed = tailored_mix(anchor, other, MixCoefficients(0.5, 0.5))
        spec = forward(mixed)
        bin_idx = int(f * n / fs)
        assert spec.amplitude[0, bin_idx] == pytest.approx(n / 2, rel=1e-9)
        assert spec.phase[0, bin_idx] == pytest.approx(-np.pi / 2, abs=1e-9)
        # elementwise mixing cancels the same bin outright
        lin = forward(linear_mix(anchor, other, 0.5))
        assert lin.amplitude[0, bin_idx] < 1e-9

    def test_pointwise_amplitude_floor(self, rng):
        for _ in range(20):
            anchor = random_signal(rng, length=48, channels=2)
            other = random_signal(rng, length=48, channels=2)
            lam_a = float(rng.uniform(0.05, 1.0))
            lam_p = float(rng.uniform(0.05, 1.0))
            mixed = tailored_mix(anchor, other, MixCoefficients(lam_a, lam_p))
            amp_mixed = forward(mixed).amplitude
            amp_anchor = forward(anchor).amplitude
            assert np.min(amp_mixed - lam_a * amp_anchor) >= -1e-9

    def test_shape_and_rate_mismatch(self, rng):
        anchor = random_signal(rng, length=32)
        with pytest.raises(ShapeMismatchError):
            tailored_mix(anchor, random_signal(rng, length=48), MixCoefficients(0.9, 0.9))
        wrong_rate = TimeSeries(random_signal(rng, length=32).data, 99.0)
        with pytest.raises(SampleRateMismatchError):
            tailored_mix(anchor, wrong_rate, MixCoefficients(0.9, 0.9))


class TestSupervisedMix:
    def test_identity(self, rng):
        anchor = random_signal(rng, length=40)
        other = random_signal(rng, length=40)
        out, weights = supervised_mix(anchor, other, (0, 1), MixCoefficients(1.0, 1.0))
        assert weights == (1.0, 0.0)
        assert roundtrip_close(out, anchor)

    def test_low_lambda_anchors_phase_on_other(self, rng):
        anchor = random_signal(rng, length=40)
        other = random_signal(rng, length=40)
        coef = MixCoefficients(0.3, 0.8)
        out, weights = supervised_mix(anchor, other, (0, 1), coef)
        assert weights == (0.3, 0.7)
        # with lambda_p = 1 the phase must be exactly the partner's
        out_p1, _ = supervised_mix(anchor, other, (0, 1), MixCoefficients(0.3, 1.0))
        spec = forward(out_p1)
        assert np.allclose(spec.phase, forward(other).phase, atol=1e-9)

    def test_role_swap_symmetry(self, rng):
        anchor = random_signal(rng, length=48, channels=2)
        other = random_signal(rng, length=48, channels=2)
        lo, _ = supervised_mix(anchor, other, (0, 1), MixCoefficients(0.2, 0.85))
        hi, _ = supervised_mix(other, anchor, (1, 0), MixCoefficients(0.8, 0.85))
        assert np.max(np.abs(lo.data - hi.data)) < 1e-9 * max(np.max(np.abs(lo.data)), 1e-12)


class TestLinearMix:
    def test_identity(self, rng):
        anchor = random_signal(rng, length=32)
        other = random_signal(rng, length=32)
        assert np.array_equal(linear_mix(anchor, other, 1.0).data, anchor.data)
        assert np.array_equal(linear_mix(anchor, other, 0.0).data, other.data)

    def test_destructive_negation(self, rng):
        anchor = random_signal(rng, length=32)
        negated = TimeSeries(-anchor.data, anchor.sample_rate_hz)
        assert np.all(linear_mix(anchor, negated, 0.5).data == 0.0)

    def test_amplitude_ratio_construction(self):
        # partner = 9x anti-phase tone: 0.9*1 - 0.1*9 = 0
        anchor = make_tone(2.0, 16.0, 32)
        other = TimeSeries(-9.0 * anchor.data, anchor.sample_rate_hz)
        out = linear_mix(anchor, other, 0.9)
        assert np.max(np.abs(out.data)) < 1e-14


class TestBinaryMix:
    def test_keep_all(self, rng):
        anchor = random_signal(rng, length=32)
        other = random_signal(rng, length=32)
        out = binary_mix(anchor, other, (1.0, 1.0), np.random.default_rng(0))
        assert np.array_equal(out.data, anchor.data)

    def test_keep_none(self, rng):
        anchor = random_signal(rng, length=32)
        other = random_signal(rng, length=32)
        out = binary_mix(anchor, other, (0.0, 0.0), np.random.default_rng(0))
        assert np.array_equal(out.data, other.data)

    def test_keep_fraction_statistics(self):
        # law of large numbers at rho = 0.9
        n = 100_000
        anchor = TimeSeries(np.ones(n), 1.0)
        other = TimeSeries(np.zeros(n), 1.0)
        out = binary_mix(anchor, other, (0.9, 0.9), np.random.default_rng(7))
        assert np.mean(out.data) == pytest.approx(0.9, abs=0.01)

    def test_mask_shared_across_channels(self, rng):
        anchor = TimeSeries(np.zeros((3, 64)), 1.0)
        other = TimeSeries(np.ones((3, 64)), 1.0)
        out = binary_mix(anchor, other, (0.5, 0.5), np.random.default_rng(3))
        assert np.all(out.data == out.data[0])


class TestGeometricMix:
    def test_identity_above_floor(self):
        anchor = TimeSeries(np.array([1.0, -2.0, 3.0, -4.0]), 1.0)
        other = TimeSeries(np.array([5.0, 6.0, -7.0, 8.0]), 1.0)
        assert np.allclose(geometric_mix(anchor, other, 1.0).data, anchor.data)

    def test_geometric_mean_value(self):
        anchor = TimeSeries(np.full(4, 4.0), 1.0)
        other = TimeSeries(np.full(4, 1.0), 1.0)
        assert np.allclose(geometric_mix(anchor, other, 0.5).data, 2.0)

    def test_anchor_sign_convention(self):
        anchor = TimeSeries(np.full(4, -4.0), 1.0)
        other = TimeSeries(np.full(4, 1.0), 1.0)
        assert np.allclose(geometric_mix(anchor, other, 0.5).data, -2.0)


class TestCutMix:
    def test_mask_geometry(self):
        keep = rectangle_keep_mask(16, 0.0, 0.25)
        assert not keep[:4].any() and keep[4:].all()
        assert rectangle_keep_mask(16, 1.0, 0.25).sum() == 12
        assert rectangle_keep_mask(16, 0.3, 0.0).all()
        assert not rectangle_keep_mask(16, 0.5, 1.0).any()

    def test_zero_length_keeps_anchor(self, rng):
        anchor = random_signal(rng, length=32)
        other = random_signal(rng, length=32)
        out = cut_mix(anchor, other, (0.5, 0.5), (0.0, 0.0), np.random.default_rng(0))
        assert np.array_equal(out.data, anchor.data)

    def test_full_length_takes_other(self, rng):
        anchor = random_signal(rng, length=32)
        other = random_signal(rng, length=32)
        out = cut_mix(anchor, other, (0.5, 0.5), (1.0, 1.0), np.random.default_rng(0))
        assert np.array_equal(out.data, other.data)

    def test_first_quarter_replaced(self, rng):
        anchor = random_signal(rng, length=64, channels=2)
        other = random_signal(rng, length=64, channels=2)
        out = cut_mix(anchor, other, (0.0, 0.0), (0.25, 0.25), np.random.default_rng(0))
        assert np.array_equal(out.data[:, :16], other.data[:, :16])
        assert np.array_equal(out.data[:, 16:], anchor.data[:, 16:])


class TestAmplitudeMix:
    def test_identity(self, rng):
        anchor = random_signal(rng, length=64)
        other = random_signal(rng, length=64)
        assert roundtrip_close(amplitude_mix(anchor, other, 1.0), anchor)

    def test_equals_tailored_with_unit_phase_lambda(self, rng):
        anchor = random_signal(rng, length=48, channels=2)
        other = random_signal(rng, length=48, channels=2)
        for normalize in (False, True):
            via_amplitude = amplitude_mix(anchor, other, 0.6, normalize_power=normalize)
            via_tailored = tailored_mix(
                anchor, other, MixCoefficients(0.6, 1.0), normalize_power=normalize
            )
            assert np.max(np.abs(via_amplitude.data - via_tailored.data)) < 1e-9

    def test_antiphase_pair_keeps_anchor_phase(self):
        n, fs, f = 64, 32.0, 4.0
        anchor = make_tone(f, fs, n, phase=0.0)
        other = make_tone(f, fs, n, phase=np.pi)
        spec = forward(amplitude_mix(anchor, other, 0.5))
        bin_idx = int(f * n / fs)
        assert spec.amplitude[0, bin_idx] == pytest.approx(n / 2, rel=1e-9)
        assert spec.phase[0, bin_idx] == pytest.approx(0.0, abs=1e-9)


class TestSpecMix:
    def test_config_invariants(self):
        cfg = StftConfig.for_length(64)
        assert (cfg.fft_length, cfg.window_length, cfg.hop) == (64, 16, 16)
        with pytest.raises(InvalidSpecError):
            StftConfig(64, 16, 8)

    @pytest.mark.parametrize("length", [8, 11, 64, 100])
    def test_zero_block_is_identity(self, rng, length):
        anchor = random_signal(rng, length=length)
        other = random_signal(rng, length=length)
        out = spec_mix(anchor, other, (0.0, 0.0), (0.0, 0.0), np.random.default_rng(0))
        assert np.max(np.abs(out.data - anchor.data)) < 1e-9

    @pytest.mark.parametrize("length", [8, 11, 64, 100])
    def test_full_block_takes_other(self, rng, length):
        anchor = random_signal(rng, length=length)
        other = random_signal(rng, length=length)
        out = spec_mix(anchor, other, (0.0, 0.0), (1.0, 1.0), np.random.default_rng(0))
        assert np.max(np.abs(out.data - other.data)) < 1e-9

    def test_frame_exact_replacement(self, rng):
        # oracle: the replaced frames must equal the partner's time samples
        anchor = random_signal(rng, length=64, channels=2)
        other = random_signal(rng, length=64, channels=2)
        out = spec_mix(anchor, other, (0.0, 0.0), (0.5, 0.5), np.random.default_rng(0))
        # window 16, 4 frames, run = 2 starting at frame 0
        assert np.max(np.abs(out.data[:, :32] - other.data[:, :32])) < 1e-9
        assert np.max(np.abs(out.data[:, 32:] - anchor.data[:, 32:])) < 1e-9

    def test_too_short(self, rng):
        anchor = TimeSeries(np.zeros(6), 1.0)
        other = TimeSeries(np.ones(6), 1.0)
        with pytest.raises(SignalTooShortError):
            spec_mix(anchor, other, (0.0, 1.0), (0.0, 1.0), np.random.default_rng(0))


class TestOddLengths:
    @pytest.mark.parametrize("length", [9, 33, 101])
    def test_tailored_identity_odd(self, rng, length):
        anchor = random_signal(rng, length=length)
        other = random_signal(rng, length=length)
        out = tailored_mix(anchor, other, MixCoefficients(1.0, 1.0))
        assert roundtrip_close(out, anchor)

    @pytest.mark.parametrize("length", [9, 33, 101])
    def test_tailored_floor_odd(self, rng, length):
        anchor = random_signal(rng, length=length)
        other = random_signal(rng, length=length)
        mixed = tailored_mix(anchor, other, MixCoefficients(0.4, 0.6))
        floor = forward(mixed).amplitude - 0.4 * forward(anchor).amplitude
        assert np.min(floor) >= -1e-9


def test_supervised_boundary_half_anchors_on_first(rng):
    # lambda_a exactly 0.5 keeps the phase walk on the first argument
    anchor = random_signal(rng, length=40)
    other = random_signal(rng, length=40)
    out, _ = supervised_mix(anchor, other, (0, 1), MixCoefficients(0.5, 1.0))
    assert np.allclose(forward(out).phase, forward(anchor).phase, atol=1e-9)


def test_self_partner_mix(rng):
    anchor = random_signal(rng, length=32)
    out = tailored_mix(anchor, anchor, MixCoefficients(0.8, 0.8))
    assert roundtrip_close(out, anchor, rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["tailored", "linear", "binary", "geometric", "cutmix", "amplitude", "specmix"]))
def test_outputs_real_finite_length_preserving(seed, method):
    rng = np.random.default_rng(seed)
    anchor = random_signal(rng, length=40, channels=2)
    other = random_signal(rng, length=40, channels=2)
    mix_rng = np.random.default_rng(seed + 1)
    if method == "tailored":
        out = tailored_mix(anchor, other, MixCoefficients(0.7, 0.9))
    elif method == "linear":
        out = linear_mix(anchor, other, 0.9)
    elif method == "binary":
        out = binary_mix(anchor, other, (0.8, 1.0), mix_rng)
    elif method == "geometric":
        out = geometric_mix(anchor, other, 0.9)
    elif method == "cutmix":
        out = cut_mix(anchor, other, (0.0, 1.0), (0.1, 0.4), mix_rng)
    elif method == "amplitude":
        out = amplitude_mix(anchor, other, 0.9)
    else:
        out = spec_mix(anchor, other, (0.0, 1.0), (0.1, 0.4), mix_rng)
    assert out.data.shape == anchor.data.shape
    assert np.all(np.isfinite(out.data))
    assert out.data.dtype == np.float64
