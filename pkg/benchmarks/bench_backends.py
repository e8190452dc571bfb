#!/usr/bin/env python3
"""Benchmark the compiled mixing kernels against the numpy fallback.

Times the fused per-bin kernel on raw arrays and the full spectral mixing
path (transforms included) under each backend, then prints one table.
The two backends produce identical values, so only the timing differs.

Usage: python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

import tsmix._kernels as kernels
from tsmix import MixCoefficients, TimeSeries, tailored_mix
from tsmix._kernels import _phase_np

_KERNEL_NAMES = ("wrap_angles", "shortest_deltas", "interp_phases", "blend", "polar_mix")


def available_backends():
    backends = []
    try:
        from tsmix._kernels import _phase_cy

        backends.append(("compiled", _phase_cy))
    except ImportError:
        pass
    backends.append(("numpy", _phase_np))
    return backends


def use_backend(impl) -> None:
    for name in _KERNEL_NAMES:
        setattr(kernels, name, getattr(impl, name))


def time_interleaved(fns, repeats: int) -> list[float]:
    """Best-of-N with the candidates alternating each round, so allocator
    and cache state never systematically favors whoever runs last."""
    for fn in fns:
        fn()  # warm up
    best = [np.inf] * len(fns)
    for _ in range(repeats):
        for i, fn in enumerate(fns):
            t0 = time.perf_counter()
            fn()
            best[i] = min(best[i], time.perf_counter() - t0)
    return best


def bench_kernel(impls, n_bins: int, repeats: int) -> list[float]:
    rng = np.random.default_rng(0)
    amp_a = np.abs(rng.standard_normal(n_bins))
    amp_b = np.abs(rng.standard_normal(n_bins))
    ph_a = rng.uniform(-np.pi, np.pi, n_bins)
    ph_b = rng.uniform(-np.pi, np.pi, n_bins)

    def call(impl):
        return lambda: impl.polar_mix(amp_a, amp_b, ph_a, ph_b, 0.8, 0.9)

    return time_interleaved([call(impl) for impl in impls], repeats)


def bench_end_to_end(impls, length: int, repeats: int) -> list[float]:
    rng = np.random.default_rng(1)
    anchor = TimeSeries(rng.standard_normal((4, length)), 100.0)
    other = TimeSeries(rng.standard_normal((4, length)), 100.0)
    coef = MixCoefficients(0.8, 0.9)

    def call(impl):
        def run():
            use_backend(impl)
            tailored_mix(anchor, other, coef)

        return run

    return time_interleaved([call(impl) for impl in impls], repeats)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=30)
    args = parser.parse_args()

    backends = available_backends()
    if len(backends) == 1:
        print("compiled extension not built; only the numpy fallback is available\n")

    kernel_sizes = (65, 513, 4097, 65537)
    signal_lengths = (128, 1024, 8192)

    impls = [impl for _, impl in backends]
    print(f"{'case':<28}" + "".join(f"{name:>14}" for name, _ in backends) + f"{'speedup':>10}")
    print("-" * (28 + 14 * len(backends) + 10))
    for n in kernel_sizes:
        times = bench_kernel(impls, n, args.repeats)
        ratio = times[-1] / times[0] if len(times) > 1 else 1.0
        row = f"polar_mix bins={n:<12}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
        print(row + f"{ratio:>9.2f}x")
    for length in signal_lengths:
        times = bench_end_to_end(impls, length, args.repeats)
        use_backend(impls[0])
        ratio = times[-1] / times[0] if len(times) > 1 else 1.0
        row = f"tailored_mix len={length:<9}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
        print(row + f"{ratio:>9.2f}x")


if __name__ == "__main__":
    main()
