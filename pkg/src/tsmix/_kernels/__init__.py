"""Backend selection for the per-bin mixing kernels.

The compiled Cython extension is preferred when it imported cleanly; the
numpy fallback is otherwise identical in behavior (and bit-for-bit in
output). Set ``TSMIX_DISABLE_EXT=1`` to force the fallback, e.g. for the
backend benchmark or to rule the extension out when debugging.
"""

import os

from . import _phase_np

if os.environ.get("TSMIX_DISABLE_EXT", "") not in ("", "0"):
    _impl = _phase_np
    BACKEND = "numpy"
else:
    try:
        from . import _phase_cy as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _phase_np
        BACKEND = "numpy"

wrap_angles = _impl.wrap_angles
shortest_deltas = _impl.shortest_deltas
interp_phases = _impl.interp_phases
blend = _impl.blend
polar_mix = _impl.polar_mix


def backend_name() -> str:
    """Name of the kernel backend selected at import: compiled or numpy."""
    return BACKEND
