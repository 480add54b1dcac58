"""Compare the numba kernels with the pure-numpy fallback.

Kernel timings run in-process against both modules. The full descent loop is
compiled for one backend per process, so it is timed in two subprocesses with
ENTGEO_DISABLE_NUMBA switched on and off.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from entgeo import _jit
from entgeo.kernels import backend_module
from entgeo.rng import SplitMix64
from entgeo.states import random_density

DESCENT_SNIPPET = """
import json, time
from entgeo import kernels
from entgeo.optimizer import OptimizerConfig, variational_distance
from entgeo.states import random_pure
psi = random_pure([2, 2], 1)
cfg = OptimizerConfig(ensemble_size=16, restarts=1, max_iters=300, seed=0)
variational_distance(psi, "sep-cone", cfg)  # warm-up / compile
t0 = time.perf_counter()
rep, _ = variational_distance(psi, "sep-cone", OptimizerConfig(ensemble_size=16, restarts=4, max_iters=2000, seed=0))
print(json.dumps({"backend": kernels.BACKEND, "seconds": time.perf_counter() - t0, "value": rep.value}))
"""


def kernel_cases():
    h = SplitMix64(1).complex_normal((16, 16))
    h = 0.5 * (h + h.conj().T)
    rho = random_density([2, 2], 4, 2).density()
    dims = np.array([2, 2], dtype=np.int64)
    theta = SplitMix64(3).normal(16 * 9)
    grid = np.concatenate([[0.0], np.logspace(-6, np.log10(3.0), 40)])
    return [
        ("jacobi_eigh 16x16", lambda m: m.jacobi_eigh(h, 100, 1e-12)),
        ("ensemble_objective K=16 2x2 +grad", lambda m: m.ensemble_objective(theta, rho, dims, 16, False, 1e-3, True, 100)),
        ("w_grid_min 41^4", lambda m: m.w_grid_min(grid)),
    ]


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def descent(disable):
    env = dict(os.environ, ENTGEO_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", DESCENT_SNIPPET], env=env, capture_output=True, text=True,
                         check=True)
    return json.loads(out.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-descent", action="store_true")
    args = parser.parse_args(argv)
    if not _jit.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend can run", file=sys.stderr)
        return 1
    fast, slow = backend_module("numba"), backend_module("numpy")
    print(f"{'kernel':40s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
    for name, call in kernel_cases():
        call(fast)  # compile outside the timing
        tf = best_of(lambda: call(fast), args.repeat)
        ts = best_of(lambda: call(slow), args.repeat)
        print(f"{name:40s} {tf * 1e3:10.3f}ms {ts * 1e3:10.3f}ms {ts / tf:8.1f}x")
    if not args.skip_descent:
        a, b = descent(False), descent(True)
        print(f"{'descent R=4 N=2000 K=16 2x2':40s} {a['seconds'] * 1e3:10.1f}ms {b['seconds'] * 1e3:10.1f}ms "
              f"{b['seconds'] / a['seconds']:8.1f}x")
        print(f"descent values: numba {a['value']:.10f}, numpy {b['value']:.10f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
