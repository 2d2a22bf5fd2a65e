"""Benchmark the compiled kernel against the numpy fallback.

Runs the standard per-bit error estimate (one encoded cycle per trial) on
both backends and reports trials/second plus an agreement check.

    python benchmarks/bench_engines.py [--trials N] [--level L]
"""

import argparse
import os
import time

from revft.builders import NONLOCAL
from revft.sim import estimate_pbit


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=500_000)
    parser.add_argument("--level", type=int, default=1)
    parser.add_argument("--g", type=float, default=0.005)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    backends = ["numpy"]
    try:
        import revft._kernel  # noqa: F401

        backends.insert(0, "kernel")
    except ImportError:
        print("compiled kernel not available; benchmarking numpy only")

    results = {}
    for backend in backends:
        os.environ["REVFT_SIM_BACKEND"] = backend
        start = time.perf_counter()
        report = estimate_pbit(args.level, NONLOCAL, args.g, args.trials, args.seed)
        elapsed = time.perf_counter() - start
        results[backend] = (report, elapsed)
        print(
            f"{backend:>7}: {elapsed:8.3f}s  {args.trials / elapsed:12.0f} trials/s  "
            f"failures={report.failures}"
        )

    if len(results) == 2:
        kernel, fallback = results["kernel"], results["numpy"]
        assert kernel[0].failures == fallback[0].failures, "backends disagree"
        print(f"speedup: {fallback[1] / kernel[1]:.1f}x kernel over numpy, "
              "identical failure counts")


if __name__ == "__main__":
    main()
