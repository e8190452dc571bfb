# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-bin mixing kernels.

Single-pass loops over the frequency bins, avoiding the temporaries the
numpy fallback allocates. Must stay operation-for-operation identical to
``_phase_np`` so both backends agree to the last bit.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, fmod

cnp.import_array()

cdef double TWO_PI = 2.0 * 3.141592653589793
cdef double PI = 3.141592653589793


cdef inline double _wrap(double a) noexcept nogil:
    cdef double m = fmod(a, TWO_PI)
    if m < 0.0:
        m += TWO_PI
    if m > PI:
        m -= TWO_PI
    return m


cdef inline double _rewrap(double r) noexcept nogil:
    # r within (-2*pi, 2*pi); one conditional shift restores (-pi, pi].
    if r > PI:
        return r - TWO_PI
    if r <= -PI:
        return r + TWO_PI
    return r


def wrap_angles(const double[::1] angles):
    """Wrap angles (radians) into (-pi, pi]."""
    cdef Py_ssize_t n = angles.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _wrap(angles[i])
    return out_arr


def shortest_deltas(const double[::1] base, const double[::1] target):
    """Signed shortest angular difference base - target, in (-pi, pi]."""
    cdef Py_ssize_t n = base.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _wrap(base[i] - target[i])
    return out_arr


def interp_phases(const double[::1] base, const double[::1] delta, double lam_p):
    """Move base phases toward the phases they are delta away from."""
    cdef Py_ssize_t n = base.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double step, r
    if lam_p == 1.0:
        out_arr[:] = np.asarray(base)
        return out_arr
    with nogil:
        for i in range(n):
            step = fabs(delta[i]) * (1.0 - lam_p)
            if delta[i] > 0.0:
                r = base[i] - step
            else:
                r = base[i] + step
            out[i] = _rewrap(r)
    return out_arr


def blend(const double[::1] a, const double[::1] b, double lam):
    """Convex combination lam*a + (1-lam)*b."""
    cdef Py_ssize_t n = a.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = lam * a[i] + (1.0 - lam) * b[i]
    return out_arr


def polar_mix(
    const double[::1] amp_a,
    const double[::1] amp_b,
    const double[::1] ph_base,
    const double[::1] ph_target,
    double lam_a,
    double lam_p,
):
    """Fused amplitude blend + directional phase interpolation."""
    cdef Py_ssize_t n = amp_a.shape[0]
    amp_arr = np.empty(n, dtype=np.float64)
    ph_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] amp = amp_arr
    cdef double[::1] ph = ph_arr
    cdef Py_ssize_t i
    cdef double d, step, r
    if lam_p == 1.0:
        with nogil:
            for i in range(n):
                amp[i] = lam_a * amp_a[i] + (1.0 - lam_a) * amp_b[i]
                ph[i] = ph_base[i]
        return amp_arr, ph_arr
    with nogil:
        for i in range(n):
            amp[i] = lam_a * amp_a[i] + (1.0 - lam_a) * amp_b[i]
            d = _wrap(ph_base[i] - ph_target[i])
            step = fabs(d) * (1.0 - lam_p)
            if d > 0.0:
                r = ph_base[i] - step
            else:
                r = ph_base[i] + step
            ph[i] = _rewrap(r)
    return amp_arr, ph_arr
