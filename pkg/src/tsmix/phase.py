"""Angle arithmetic: wrapping, shortest signed difference, interpolation.

All angles are radians in (-pi, pi]. An exact separation of pi is a tie
between the two directions; the modular difference resolves it to +pi, so
interpolation then proceeds counterclockwise from the anchor. Thin wrappers
around the kernel backend (compiled or numpy, see ``tsmix._kernels``).
"""

import numpy as np

from . import _kernels
from .errors import (
    InvalidSpecError,
    LambdaOutOfRangeError,
    NonFiniteError,
    ShapeMismatchError,
)


def _as_angle_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr.ndim == 0


def wrap(angle):
    """Wrap angle(s) into (-pi, pi]; -pi maps to +pi. Scalar in, scalar out."""
    arr, scalar = _as_angle_array(angle)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("angle contains NaN or Inf")
    out = _kernels.wrap_angles(np.ascontiguousarray(arr.ravel()))
    return float(out[0]) if scalar else out.reshape(arr.shape)


def shortest_delta(anchor_phase, other_phase):
    """Signed shortest difference anchor - other per bin, in (-pi, pi].

    The sign encodes the direction from the other sample to the anchor on
    the phasor circle; the magnitude is the minimal angular separation.
    """
    a, a_scalar = _as_angle_array(anchor_phase)
    b, b_scalar = _as_angle_array(other_phase)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"phase shapes differ: {a.shape} vs {b.shape}")
    out = _kernels.shortest_deltas(
        np.ascontiguousarray(a.ravel()), np.ascontiguousarray(b.ravel())
    )
    return float(out[0]) if (a_scalar and b_scalar) else out.reshape(a.shape)


def interpolate_phase(anchor_phase, delta, lambda_p: float):
    """Move the anchor phase toward the sample it is delta away from.

    Per bin: anchor - |delta|*(1-lambda_p) when delta > 0, anchor +
    |delta|*(1-lambda_p) otherwise, re-wrapped to (-pi, pi]. lambda_p = 1
    returns the anchor phases unchanged; lambda_p -> 0 approaches the other
    sample's phase and never overshoots it.
    """
    if not (0.0 < lambda_p <= 1.0):
        raise LambdaOutOfRangeError(f"lambda_p must be in (0, 1], got {lambda_p}")
    a, a_scalar = _as_angle_array(anchor_phase)
    d, d_scalar = _as_angle_array(delta)
    if a.shape != d.shape:
        raise ShapeMismatchError(f"anchor {a.shape} vs delta {d.shape}")
    if np.any(np.abs(d) > np.pi):
        raise InvalidSpecError("delta magnitudes must not exceed pi (a shortest difference)")
    out = _kernels.interp_phases(
        np.ascontiguousarray(a.ravel()), np.ascontiguousarray(d.ravel()), float(lambda_p)
    )
    return float(out[0]) if (a_scalar and d_scalar) else out.reshape(a.shape)
