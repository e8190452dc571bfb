"""Pure-numpy implementations of the per-bin mixing kernels.

These are the fallback for the compiled extension in ``_phase_cy``. Both
backends must perform the same elementary operations in the same order so
that they agree to the last bit; any change here must be mirrored there.

All functions take 1-D contiguous float64 arrays and return new arrays.
"""

import numpy as np

TWO_PI = 2.0 * np.pi
PI = np.pi


def wrap_angles(angles: np.ndarray) -> np.ndarray:
    """Wrap angles (radians) into (-pi, pi]."""
    m = np.remainder(angles, TWO_PI)  # [0, 2*pi)
    return np.where(m > PI, m - TWO_PI, m)


def shortest_deltas(base: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Signed shortest angular difference base - target, in (-pi, pi].

    Positive means the target sits clockwise of the base in the phasor
    plane; a separation of exactly pi resolves to +pi.
    """
    return wrap_angles(base - target)


def interp_phases(base: np.ndarray, delta: np.ndarray, lam_p: float) -> np.ndarray:
    """Move each base phase toward the phase it is delta away from.

    The step is ``|delta| * (1 - lam_p)``, taken against the sign of delta,
    so lam_p = 1 returns the base phases unchanged and lam_p -> 0 lands on
    the other phase. Results are re-wrapped into (-pi, pi] without touching
    values already in range.
    """
    if lam_p == 1.0:
        return base.copy()
    step = np.abs(delta) * (1.0 - lam_p)
    r = np.where(delta > 0.0, base - step, base + step)
    # r is within (-2*pi, 2*pi); one conditional shift restores the range
    # exactly, unlike a general mod which would perturb in-range values.
    return np.where(r > PI, r - TWO_PI, np.where(r <= -PI, r + TWO_PI, r))


def blend(a: np.ndarray, b: np.ndarray, lam: float) -> np.ndarray:
    """Convex combination lam*a + (1-lam)*b."""
    return lam * a + (1.0 - lam) * b


def polar_mix(
    amp_a: np.ndarray,
    amp_b: np.ndarray,
    ph_base: np.ndarray,
    ph_target: np.ndarray,
    lam_a: float,
    lam_p: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Fused amplitude blend + directional phase interpolation.

    Amplitudes are combined with weight lam_a on ``amp_a``; phases start at
    ``ph_base`` and move toward ``ph_target`` by the shortest angular path,
    scaled by (1 - lam_p).
    """
    amp = blend(amp_a, amp_b, lam_a)
    if lam_p == 1.0:
        return amp, ph_base.copy()
    delta = shortest_deltas(ph_base, ph_target)
    return amp, interp_phases(ph_base, delta, lam_p)
