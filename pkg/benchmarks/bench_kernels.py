"""Compare the compiled and numpy outcome kernels on batched EWL evaluations.

    python benchmarks/bench_kernels.py [--batch 20000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from ewlgames import kernels
from ewlgames.ewl import catalog


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    for name in ("bos_p5", "mod4_ghz", "minority_p2", "minority_p3"):
        p, s = catalog(name)
        _, members = p.strategy_space.members()
        units = members[rng.integers(0, len(members), size=(args.batch, p.n))]
        h = None if p.h_is_identity else p.h_op
        results, times = {}, {}
        for backend, fn in sorted(kernels.BACKENDS.items()):
            results[backend] = fn(p.rho_j, h, units)
            times[backend] = min(timeit.repeat(lambda: fn(p.rho_j, h, units), number=1, repeat=args.repeat))
        line = "  ".join(f"{b}={t * 1e3:8.2f} ms" for b, t in times.items())
        if len(results) == 2:
            diff = np.max(np.abs(results["python"] - results["cython"]))
            line += f"  speedup={times['python'] / times['cython']:5.2f}x  max|diff|={diff:.1e}"
        print(f"{name:12s} n={p.n} batch={args.batch}  {line}")


if __name__ == "__main__":
    main()
