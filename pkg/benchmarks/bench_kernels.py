"""Compare the numba and numpy conditional-entropy kernels.

    python benchmarks/bench_kernels.py [--grid 64] [--repeat 20]

Times one coarse direction scan (the hot loop of every numeric discord
evaluation) and one full numeric super-discord per backend.
"""
import argparse
import math
import statistics
import time

import numpy as np

from superdiscord import _accel, _kernels
from superdiscord import correlations as corr


def best_of(func, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return min(times), statistics.median(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=64, help="directions per angle")
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args(argv)

    rho = np.ascontiguousarray(corr.werner_state(-0.6), dtype=complex)
    cfg = corr.OptimizerConfig(n_theta=args.grid, n_phi=args.grid)
    th, ph = corr.direction_grid(cfg)
    t = math.tanh(0.5)

    kernels = {"numba": _kernels.conditional_entropy_numba, "numpy": _kernels.conditional_entropy_numpy}
    if not _accel.HAVE_NUMBA:
        del kernels["numba"]
    for k in kernels.values():  # compile / warm caches
        k(rho, th, ph, t)
    ref = kernels["numpy"](rho, th, ph, t)

    print(f"direction scan, {th.size} directions, best/median of {args.repeat}")
    for name, k in kernels.items():
        lo, med = best_of(lambda: k(rho, th, ph, t), args.repeat)
        dev = np.max(np.abs(k(rho, th, ph, t) - ref))
        print(f"  {name:6s} {lo * 1e3:9.3f} ms  {med * 1e3:9.3f} ms  max|diff| {dev:.1e}")

    print(f"super_discord_numeric (scan + refinement), best/median of {args.repeat}")
    saved = _accel.USE_NUMBA
    try:
        for name in kernels:
            _accel.USE_NUMBA = name == "numba"
            lo, med = best_of(lambda: corr.super_discord_numeric(rho, 0.5, cfg), args.repeat)
            print(f"  {name:6s} {lo * 1e3:9.3f} ms  {med * 1e3:9.3f} ms")
    finally:
        _accel.USE_NUMBA = saved


if __name__ == "__main__":
    main()
