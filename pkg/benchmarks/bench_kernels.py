"""Benchmark the compiled kernels against the numpy fallback.

Runs the three hot kernels at the sizes the estimators actually use
(covariance build, spectrum sweep over the default grid, transform
accumulation) plus a larger stress size, and prints per-backend timings.

    python benchmarks/bench_kernels.py [--repeat 7]
"""

import argparse
import time

import numpy as np

from qharm import _kernels
from qharm.quaternion import DEFAULT_AXIS

MU = np.array(DEFAULT_AXIS.components())


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    a_cov = rng.normal(size=(32, 80, 4))
    b_cov = rng.normal(size=(80, 32, 4))
    a_big = rng.normal(size=(96, 200, 4))
    b_big = rng.normal(size=(200, 96, 4))
    quad = rng.normal(size=(32, 32, 4))
    quad = 0.5 * (quad + quad.transpose(1, 0, 2))
    thetas = np.linspace(-np.pi / 20, np.pi / 20, 2001)
    v4 = rng.normal(size=(111, 4))
    vmu4 = _kernels.qmul4(v4, np.array([(0.0,) + DEFAULT_AXIS.components()]))
    v4_big = rng.normal(size=(4096, 4))
    vmu4_big = _kernels.qmul4(v4_big, np.array([(0.0,) + DEFAULT_AXIS.components()]))
    return [
        ("qmm4 32x80 @ 80x32", lambda: _kernels.qmm4(a_cov, b_cov)),
        ("qmm4 96x200 @ 200x96", lambda: _kernels.qmm4(a_big, b_big)),
        ("quad_form_grid M=32, G=2001", lambda: _kernels.quad_form_grid(quad, thetas, MU)),
        ("fourier_grid N=111, G=2001", lambda: _kernels.fourier_grid(v4, vmu4, thetas)),
        ("fourier_grid N=4096, G=2001", lambda: _kernels.fourier_grid(v4_big, vmu4_big, thetas)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=7, help="take the best of this many runs")
    args = parser.parse_args()

    backends = _kernels.available_backends()
    print(f"available backends: {backends}")
    if "c" not in backends:
        print("compiled extension not built; timing the fallback only")

    rng = np.random.default_rng(0)
    rows = []
    for name, fn in cases(rng):
        timings = {}
        for backend in backends:
            _kernels.set_backend(backend)
            fn()  # warm up
            timings[backend] = best_of(fn, args.repeat)
        rows.append((name, timings))

    width = max(len(name) for name, _ in rows)
    header = f"{'kernel':<{width}}  " + "".join(f"{b + ' [ms]':>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'c speedup':>12}"
    print(header)
    print("-" * len(header))
    for name, timings in rows:
        line = f"{name:<{width}}  " + "".join(
            f"{timings[b] * 1e3:>12.3f}" for b in backends
        )
        if len(backends) == 2:
            line += f"{timings['python'] / timings['c']:>11.2f}x"
        print(line)


if __name__ == "__main__":
    main()
