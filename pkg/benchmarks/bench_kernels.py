"""Compare the compiled and pure-Python kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3]

Times whole Monte Carlo runs to consensus and the subset enumeration used by
the graph parameters.  Both backends consume the same random stream, so the
step counts are checked to match.
"""

import argparse
import sys
import time

import numpy as np

from discordant import kernels
from discordant.configuration import coloring_opinions, default_coloring
from discordant.graph import generate

CASES = [
    ("cycle", 200, kernels.PUSH, 20),
    ("complete", 200, kernels.PUSH, 20),
    ("star", 200, kernels.PULL, 20),
    ("barbell", 8, kernels.PULL, 20),
]
CUT_SIZES = [16, 20]


def _time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_runs(backend, family, size, proto, runs):
    g = generate(family, size)
    start = np.asarray(coloring_opinions(g, default_coloring(family)), dtype=np.int8)
    rng = np.random.default_rng(0)
    total = 0
    for _ in range(runs):
        ops = start.copy()
        steps, _ = kernels.run(g, ops, proto, rng, 10**9, backend=backend)
        total += steps
    return total


def bench_cuts(backend, n):
    g = generate("cycle", n)
    w = np.ones(len(g.indices))
    vw = np.asarray(g.degrees(), dtype=np.float64)
    return kernels.cut_ratios(g, w, vw, backend=backend)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if "compiled" not in kernels.BACKENDS:
        print("compiled backend not built; nothing to compare", file=sys.stderr)
        return 1
    names = ["python", "compiled"]
    print(f"{'workload':<36}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for family, size, proto, runs in CASES:
        times, totals = [], []
        for b in names:
            t, total = _time(lambda b=b: bench_runs(b, family, size, proto, runs), args.repeat)
            times.append(t)
            totals.append(total)
        assert totals[0] == totals[1], "backends disagree on step counts"
        label = f"{family}({size}) x{runs} [{totals[0]} steps]"
        print(f"{label:<36}{times[0]:>12.4f}{times[1]:>12.4f}{times[0] / times[1]:>10.1f}")
    for n in CUT_SIZES:
        times, outs = [], []
        for b in names:
            t, out = _time(lambda b=b: bench_cuts(b, n), args.repeat)
            times.append(t)
            outs.append(out)
        assert np.allclose(outs[0], outs[1], equal_nan=True)
        label = f"cut_ratios cycle({n})"
        print(f"{label:<36}{times[0]:>12.4f}{times[1]:>12.4f}{times[0] / times[1]:>10.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
