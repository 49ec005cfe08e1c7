"""Time the compiled and numpy stepping kernels on the same walks.

    python benchmarks/bench_kernels.py --steps 2000 20000 --repeat 3
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from tdqwalk import InitialState, RandomPhaseSchedule, run_walk
from tdqwalk.kernels import BACKENDS


def best_time(kernel, steps: int, repeat: int) -> tuple[float, np.ndarray]:
    init = InitialState(math.pi / 4)
    sched = RandomPhaseSchedule(math.pi / 4, "alpha", seed=1)
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        state = run_walk(init, sched, steps, kernel=kernel)
        best = min(best, time.perf_counter() - start)
    return best, state.psi_plus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, nargs="+", default=[1000, 5000, 20000])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    names = sorted(BACKENDS)
    print(f"backends: {', '.join(names)}")
    print(f"{'steps':>8} " + " ".join(f"{n + ' [s]':>12}" for n in names) + f" {'speedup':>8} {'max diff':>10}")
    for steps in args.steps:
        results = {n: best_time(BACKENDS[n], steps, args.repeat) for n in names}
        row = f"{steps:>8} " + " ".join(f"{results[n][0]:>12.4f}" for n in names)
        if len(names) == 2:
            (t_c, a), (t_p, b) = results["cython"], results["python"]
            row += f" {t_p / t_c:>8.2f} {np.max(np.abs(a - b)):>10.1e}"
        print(row)


if __name__ == "__main__":
    main()
