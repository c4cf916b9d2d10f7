"""Time the Cayley-ball kernels: compiled extension vs pure-numpy fallback.

Usage::

    python3 benchmarks/benchmark_ball.py [--radius 5] [--repeats 5]

Set ANOSOVLAB_THREADS=1 before running for stable single-threaded numbers.
Enumeration is deterministic, so both kernels are checked to produce the
same tree before timings are reported.
"""

import argparse
import statistics
import time

import numpy as np

from anosovlab.ball import available_backends, enumerate_ball
from anosovlab.reps import fuchsian_genus2, sym_power_lift


def _time_backend(rep, radius, backend, repeats):
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        ball = enumerate_ball(rep, radius, backend=backend)
        samples.append(time.perf_counter() - start)
    return ball, samples


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--radius", type=int, default=5, help="ball radius (default 5)")
    parser.add_argument("--repeats", type=int, default=5, help="timed runs per kernel")
    parser.add_argument("--N", type=int, default=4, dest="big_n",
                        help="symmetric-power dimension of the timed rep")
    args = parser.parse_args()

    rep = sym_power_lift(fuchsian_genus2(), args.big_n)
    backends = available_backends()
    print(f"kernels available: {', '.join(backends)}")
    print(f"radius {args.radius}, dim {rep.dim}, {args.repeats} repeats\n")

    results = {}
    reference = None
    for backend in backends:
        ball, samples = _time_backend(rep, args.radius, backend, args.repeats)
        results[backend] = (ball, samples)
        print(
            f"{backend:>9}: median {statistics.median(samples) * 1e3:9.2f} ms  "
            f"min {min(samples) * 1e3:9.2f} ms  ({len(ball)} elements)"
        )
        if reference is None:
            reference = ball
        else:
            same_tree = np.array_equal(reference.parents, ball.parents) and np.array_equal(
                reference.letters, ball.letters
            )
            print(f"{'':>9}  enumeration matches {backends[0]}: {same_tree}")
            if not same_tree:
                return 1

    if len(backends) == 2:
        med = {b: statistics.median(s) for b, (_, s) in results.items()}
        print(f"\nspeedup (pure / compiled): {med['pure'] / med['compiled']:.1f}x")
    else:
        print("\ncompiled kernel not built; timed the pure fallback only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
