"""Benchmark the compiled kernel extension against the pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--quick]

Times the three quasiprobability batch paths, the scalar grouped MK/MK'
evaluation that sits inside the optimizer loop, and one full Svetlichny
maximization per backend.
"""

from __future__ import annotations

import argparse
import time

import numpy as np


def _time(fn, repeats: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_batches(mod, n_points: int) -> dict[str, float]:
    rng = np.random.default_rng(0)
    pts6 = rng.normal(0.0, 0.8, (n_points, 6))
    out = {}
    for fam, param, tag in ((0, 0.8, "photon"), (1, 0.5, "squeezed"), (2, 1.0, "cat")):
        dt = _time(lambda: mod.w3(fam, param, -0.5, pts6), 3)
        out[f"w3 batch {tag}"] = dt / n_points
    return out


def bench_scalar(mod, repeats: int) -> float:
    prep = mod.PreparedBell(2, 1.0, -1.0)
    x = np.ascontiguousarray(np.random.default_rng(1).normal(0.0, 0.5, 12))
    return _time(lambda: prep.mk_pair(x), repeats)


def bench_maximize(backend_env: str) -> float:
    # Run in a subprocess so the import-time backend selection applies.
    import subprocess
    import sys

    code = (
        "import time\n"
        "from phasebell import optimize, states\n"
        "cfg = optimize.OptimizerConfig(multistart_count=8, rng_seed=1)\n"
        "t0 = time.perf_counter()\n"
        "opt = optimize.maximize_svetlichny(states.GhzEcs(1.0), 0.0, cfg)\n"
        "print(time.perf_counter() - t0, opt.value)\n"
    )
    env = dict(__import__("os").environ, PHASEBELL_BACKEND=backend_env)
    res = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
    )
    dt, value = res.stdout.split()
    return float(dt), float(value)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    n_points = 100_000 if args.quick else 1_000_000
    scalar_reps = {"compiled": 100_000, "python": 10_000}
    if args.quick:
        scalar_reps = {"compiled": 20_000, "python": 2_000}

    from phasebell._kernels import _slow

    backends = {"python": _slow}
    try:
        from phasebell._kernels import _fast

        backends["compiled"] = _fast
    except ImportError:
        print("compiled backend not available; benchmarking fallback only")

    rows = []
    for name, mod in backends.items():
        for tag, per_eval in bench_batches(mod, n_points).items():
            rows.append((name, tag, per_eval * 1e9, "ns/eval"))
        rows.append((name, "scalar mk_pair", bench_scalar(mod, scalar_reps[name]) * 1e6, "us/call"))

    print(f"{'backend':<10} {'kernel':<22} {'time':>12}")
    for name, tag, val, unit in rows:
        print(f"{name:<10} {tag:<22} {val:10.2f} {unit}")

    print()
    for env_name in backends:
        dt, value = bench_maximize(env_name)
        print(f"maximize_svetlichny(cat 1.0, s=0), {env_name:>8}: {dt:6.2f} s  (|S| = {value:.6f})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
