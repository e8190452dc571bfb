"""Shared fixtures and signal builders for the test suite."""

import numpy as np
import pytest

from tsmix import TimeSeries


def make_tone(freq_hz, sample_rate_hz, length, amplitude=1.0, phase=0.0, channels=1):
    """Sinusoid amplitude*cos(2*pi*f*t + phase), replicated across channels."""
    t = np.arange(length) / sample_rate_hz
    wave = amplitude * np.cos(2 * np.pi * freq_hz * t + phase)
    return TimeSeries(np.tile(wave, (channels, 1)), sample_rate_hz)


def random_signal(rng, length=64, channels=1, sample_rate_hz=32.0):
    return TimeSeries(rng.standard_normal((channels, length)), sample_rate_hz)


def direct_dft(data: np.ndarray) -> np.ndarray:
    """O(N^2) reference transform: X_k = sum_n x_n e^{-2i pi k n / N}."""
    data = np.atleast_2d(data)
    n = data.shape[1]
    grid = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(grid[: n // 2 + 1], grid) / n)
    return data @ kernel.T


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
