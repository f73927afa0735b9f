#!/usr/bin/env python3
"""Benchmark the Cython kernel backend against the pure-Python fallback.

Times the scalar kernels directly and one end-to-end geodesic integration per
backend.  Run from the repository root after ``pip install -e .``:

    python3 benchmarks/bench_backends.py
"""

import random
import subprocess
import sys
import time

from h5geo._core import _kernels_py

try:
    from h5geo._core import _kernels_cy
except ImportError:
    _kernels_cy = None


def _time_kernel(fn, calls):
    t0 = time.perf_counter()
    for args in calls:
        fn(*args)
    return time.perf_counter() - t0


def bench_kernels(n=20000, seed=7):
    rng = random.Random(seed)
    cases = {
        "carlson_rf": [
            tuple(rng.uniform(1e-6, 10.0) for _ in range(3)) for _ in range(n)
        ],
        "am_sncndn": [
            (rng.uniform(-20.0, 20.0), rng.uniform(0.0, 0.999)) for _ in range(n)
        ],
        "ellint_e_core": [
            (rng.uniform(-10.0, 10.0), rng.uniform(0.0, 0.999)) for _ in range(n)
        ],
        "full_rhs": [
            tuple(rng.uniform(-2.0, 2.0) for _ in range(5))
            + ([rng.uniform(-2.0, 2.0) for _ in range(5)],)
            for _ in range(n)
        ],
        "hyper_rhs": [
            (rng.uniform(0.3, 2.0), rng.uniform(0.2, 1.3))
            + tuple(rng.uniform(-2.0, 2.0) for _ in range(7))
            for _ in range(n)
        ],
    }
    print(f"{'kernel':<16}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, calls in cases.items():
        t_py = _time_kernel(getattr(_kernels_py, name), calls)
        if _kernels_cy is None:
            print(f"{name:<16}{1e3 * t_py:>14.2f}{'n/a':>14}{'n/a':>10}")
            continue
        t_cy = _time_kernel(getattr(_kernels_cy, name), calls)
        print(
            f"{name:<16}{1e3 * t_py:>14.2f}{1e3 * t_cy:>14.2f}"
            f"{t_py / t_cy:>9.1f}x"
        )


_E2E = """
import time
import h5geo
from h5geo.reduction import ConservedCharges, state_from_charges
from h5geo.dynamics import IntegratorConfig, integrate_reduced

c = ConservedCharges(c0=1.0, c1=0.5, c2=0.3, c3=0.2, c4=0.5)
y0 = state_from_charges(c, 1.2)
cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12)
t0 = time.perf_counter()
for _ in range(5):
    integrate_reduced(y0, (0.0, 20.0), cfg)
print(h5geo.BACKEND_NAME, (time.perf_counter() - t0) / 5.0)
"""


def bench_end_to_end():
    print("\nend-to-end reduced integration, t in [0, 20], rel_tol 1e-10 (s/run):")
    results = {}
    for env_flag in (None, "1"):
        env = {"PATH": "/usr/bin:/bin:/usr/local/bin"}
        if env_flag is not None:
            env["H5GEO_PURE_PY"] = env_flag
        proc = subprocess.run(
            [sys.executable, "-c", _E2E],
            capture_output=True,
            text=True,
            env=env,
        )
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            raise SystemExit(1)
        name, secs = proc.stdout.split()
        results[name] = float(secs)
        print(f"  {name:<8} {float(secs):.4f}")
    if "cython" in results and "python" in results:
        print(f"  speedup  {results['python'] / results['cython']:.1f}x")


if __name__ == "__main__":
    bench_kernels()
    bench_end_to_end()
