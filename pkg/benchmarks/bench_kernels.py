"""Timing comparison of the accelerated kernels against the pure-numpy path.

Run with the default environment to time the compiled kernels, and with
SZEGO_NO_NUMBA=1 to confirm the fallback is selected.  This script times both
paths in one process by calling the compiled dispatchers and the `_np`
reference implementations directly.

    python3 benchmarks/bench_kernels.py
"""

import timeit

import numpy as np

from szegolab import _accel


def _inputs():
    rng = np.random.default_rng(3)
    tau = rng.uniform(1e-3, 1e3, 4096)
    gammas = np.cumsum(rng.uniform(1.0, 20.0, 200))
    z = rng.uniform(-5, 5, 2048) + 1j * rng.uniform(0.1, 5, 2048)
    t = rng.uniform(0, 1, 8192)
    coeffs = rng.normal(size=40)
    freqs = (2.0 * np.arange(40) + 1.0) ** 2
    return tau, gammas, z, t, coeffs, freqs


def _time(label, fn, repeat=5, number=20):
    best = min(timeit.repeat(fn, repeat=repeat, number=number)) / number
    print(f"  {label:<28s} {best * 1e3:9.3f} ms/call")
    return best


def main():
    tau, gammas, z, t, coeffs, freqs = _inputs()
    print(f"active path: {'numba' if _accel.USING_NUMBA else 'numpy'} "
          f"(set SZEGO_NO_NUMBA=1 to force the numpy path)")

    cases = [
        ("boundary_product",
         lambda: _accel.boundary_product(tau, gammas),
         lambda: _accel._boundary_product_np(tau, gammas)),
        ("interior_log_product",
         lambda: _accel.interior_log_product(z, gammas),
         lambda: _accel._interior_log_product_np(z, gammas)),
        ("sine_series",
         lambda: _accel.sine_series(t, coeffs, freqs),
         lambda: _accel._sine_series_np(t, coeffs, freqs)),
    ]

    for name, fast, slow in cases:
        fast()  # trigger compilation outside the timed region
        print(name)
        tf = _time("dispatched", fast)
        tn = _time("numpy reference", slow)
        print(f"  speedup: {tn / tf:.2f}x")


if __name__ == "__main__":
    main()
