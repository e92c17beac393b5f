"""Compiled kernels vs the pure-Python fallback.

Times the two hot spots (the conditional-entropy grid scan and the Jacobi
eigensolver) with both backends, then one full oracle evaluation in a
subprocess per backend so that module-level selection is exercised too.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from superdiscord import _fallback, discord, states
from superdiscord.discord import OptimizerConfig

try:
    from superdiscord import _kernels
except ImportError:
    _kernels = None

FIG1B = states.XStateParams(0.2, 0.3, -0.4, 0.56)

ORACLE_SNIPPET = (
    "import time; from superdiscord import BACKEND, discord, states;"
    "q = states.XStateParams(0.2, 0.3, -0.4, 0.56);"
    "t0 = time.perf_counter(); [discord.sqd_oracle(q, x) for x in (0.5, 1.0, 2.0, 5.0)];"
    "print(BACKEND, (time.perf_counter() - t0) / 4)"
)


def grid_dirs():
    cfg = OptimizerConfig()
    polar, azimuth = discord._grid(cfg)
    return np.concatenate([discord._row_dirs(th, azimuth) for th in polar])


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rho = np.array(states.to_density_matrix(FIG1B))
    dirs = grid_dirs()
    t = np.tanh(1.0)
    m = np.array(states.to_density_matrix(FIG1B))

    mods = [("python", _fallback)] + ([("cython", _kernels)] if _kernels is not None else [])
    if _kernels is None:
        print("compiled extension not built; only the fallback is timed")
    np.testing.assert_allclose(
        mods[-1][1].cond_entropy_batch(rho, t, dirs), _fallback.cond_entropy_batch(rho, t, dirs), atol=1e-13
    )

    print(f"{'kernel':<34s} {'backend':<8s} {'time':>12s}")
    timings = {}
    for name, mod in mods:
        ts = best_of(lambda: mod.cond_entropy_batch(rho, t, dirs), args.repeat, 5)
        tj = best_of(lambda: mod.herm_eigvals(m, 1e-14, 50), args.repeat, 200)
        timings[name] = (ts, tj)
        print(f"{'grid scan (' + str(len(dirs)) + ' directions)':<34s} {name:<8s} {ts * 1e3:9.3f} ms")
        print(f"{'Jacobi 4x4':<34s} {name:<8s} {tj * 1e6:9.2f} us")
    if "cython" in timings:
        py, cy = timings["python"], timings["cython"]
        print(f"speed-up: grid scan {py[0] / cy[0]:.1f}x, Jacobi {py[1] / cy[1]:.1f}x")

    print("\nfull sqd_oracle (grid + refinement), mean of 4 strengths:")
    for pure in ("1", "0"):
        env = dict(os.environ, SUPERDISCORD_PURE=pure)
        out = subprocess.run([sys.executable, "-c", ORACLE_SNIPPET], env=env, capture_output=True, text=True,
                             check=True).stdout.split()
        print(f"  {out[0]:<8s} {float(out[1]) * 1e3:9.1f} ms")


if __name__ == "__main__":
    main()
