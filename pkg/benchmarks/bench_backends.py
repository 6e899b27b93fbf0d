"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_backends.py [--repeat 5]

Times the compartment sums on a 2001-point wall grid (the equilibrium-wall
scan) and a short engine sweep, and checks both backends agree.  The sweep
part switches backends through the SZILARD_NUMBA flag in a subprocess.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from szilard import kernels
from szilard._accel import HAVE_NUMBA

LOG_CUT = -np.log(1e-12)

SWEEP_SNIPPET = """
import time, numpy as np
from szilard.sweep import temp_sweep
from szilard.ensemble import Interaction
temp_sweep("fermion-spin-half", Interaction("spin", -1.0), 0.47, [1.0])
start = time.perf_counter()
g = temp_sweep("fermion-spin-half", Interaction("spin", -1.0), 0.47, np.geomspace(1e-3, 10, 40))
print(time.perf_counter() - start, repr(float(g.dS.sum())))
"""


def best_of(func, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_kernels(repeat):
    grid = np.linspace(0.0, 1.0, 2001)
    print(f"{'kernel':<8}{'t':>8}{'numpy [ms]':>14}{'numba [ms]':>14}{'speedup':>10}{'max diff':>12}")
    for name, fn in (("single", kernels.log_z_single), ("pair", kernels.log_z_pair)):
        for t in (0.01, 1.0, 10.0):
            res = {}
            for backend in ("numpy", "numba"):
                fn(grid, t, LOG_CUT, backend=backend)  # warm-up / compile
                res[backend] = (best_of(lambda: fn(grid, t, LOG_CUT, backend=backend), repeat),
                                fn(grid, t, LOG_CUT, backend=backend)[0])
            a, b = res["numpy"][1], res["numba"][1]
            ok = np.isfinite(a)
            diff = float(np.max(np.abs(a[ok] - b[ok])))
            tn, tj = res["numpy"][0] * 1e3, res["numba"][0] * 1e3
            print(f"{name:<8}{t:>8g}{tn:>14.2f}{tj:>14.2f}{tn / tj:>10.1f}{diff:>12.1e}")


def bench_sweep():
    print("\n40-point spin-1/2 temperature sweep:")
    for flag in ("0", "1"):
        env = dict(os.environ, SZILARD_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", SWEEP_SNIPPET], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        label = "numba" if flag == "1" else "numpy"
        print(f"  {label:<6} {float(out[0]):7.3f} s   sum dS = {out[1]}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")
    bench_kernels(args.repeat)
    bench_sweep()


if __name__ == "__main__":
    main()
