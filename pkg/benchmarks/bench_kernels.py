"""Compare the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 200000] [--repeat 7]

Also times a full catalog verification suite with each backend, running the
suite in a subprocess because the backend is fixed at import time.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from loxoforge import _kernels

SUITE_SNIPPET = (
    "import time; from loxoforge.verify import run_suite; run_suite(['sphere']); "
    "t = time.perf_counter(); run_suite(); print(time.perf_counter() - t)"
)


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_kernels(n, repeat):
    rng = np.random.default_rng(0)
    p = rng.uniform(-0.9, 0.9, (n, 3))
    p[:, 1] = np.abs(p[:, 1]) + 0.1
    w1 = rng.normal(size=(n, 3))
    w2 = rng.normal(size=(n, 3))
    x = np.sort(rng.uniform(0.0, 10.0, n))
    y = np.sin(x)
    cases = {
        "gram bcv": (lambda: _kernels.gram_numpy(0, 1.0, -0.25, p, w1, w2),
                     lambda: _kernels.gram_numba(0, 1.0, -0.25, p, w1, w2)),
        "gram h2xr": (lambda: _kernels.gram_numpy(1, 0.0, 0.0, p, w1, w2),
                      lambda: _kernels.gram_numba(1, 0.0, 0.0, p, w1, w2)),
        "metric tensor": (lambda: _kernels.metric_tensor_numpy(0, 1.0, -0.25, p),
                          lambda: _kernels.metric_tensor_numba(0, 1.0, -0.25, p)),
        "simpson": (lambda: _kernels.simpson_numpy(x, y), lambda: _kernels.simpson_numba(x, y)),
    }
    print(f"{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, (f_np, f_nb) in cases.items():
        f_nb()  # compile
        t_np, t_nb = _best(f_np, repeat), _best(f_nb, repeat)
        print(f"{name:<16}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}")


def bench_suite():
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, LOXOFORGE_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", SUITE_SNIPPET], env=env, check=True,
                             capture_output=True, text=True).stdout.strip()
        print(f"catalog suite ({label}): {float(out):.2f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--skip-suite", action="store_true")
    args = ap.parse_args()
    if not _kernels.HAS_NUMBA:
        sys.exit("numba is not installed")
    bench_kernels(args.n, args.repeat)
    if not args.skip_suite:
        bench_suite()


if __name__ == "__main__":
    main()
