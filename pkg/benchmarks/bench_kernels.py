"""Compare the compiled and pure-numpy evolver kernels.

Runs the same nonlinear evolution with each backend, reports wall time per
step and checks that both produce the same final state.

    python benchmarks/bench_kernels.py [--h 0.01] [--t-end 2.0] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ecwave import kernels
from ecwave.nonlinear_evolution import evolve


def run(backend: str, h: float, t_end: float, repeat: int):
    init = (lambda r: 0.5 * np.exp(-r**2), None)
    best = np.inf
    traj = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        traj = evolve(init, h, 20.0, t_end, snapshots=2, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, traj


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--h", type=float, default=0.01)
    ap.add_argument("--t-end", type=float, default=2.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        kernels.get_backend("compiled")
        backends = ["compiled", "python"]
    except ImportError:
        print("compiled extension not built; timing the numpy kernels only")
        backends = ["python"]
    results = {}
    for b in backends:
        sec, traj = run(b, args.h, args.t_end, args.repeat)
        steps = traj.history.shape[0]
        results[b] = (sec, traj)
        print(f"{b:9s} {sec:8.3f} s  {steps:7d} steps  {1e6 * sec / steps:8.2f} us/step  "
              f"{int(round(20.0 / args.h))} nodes")
    if len(results) == 2:
        (tc, a), (tp, b) = results["compiled"], results["python"]
        diff = float(np.max(np.abs(a.u[-1] - b.u[-1])))
        print(f"speed-up {tp / tc:.1f}x, max final-state difference {diff:.2e}")


if __name__ == "__main__":
    main()
