"""Time the weight-orbit BFS with the numba and numpy kernels.

    python3 benchmarks/bench_orbit.py [--repeat 3]

Each case enumerates a parabolic quotient (tracking coset representatives) or
a full Weyl group orbit (weights only).  The numba timing excludes the first
call, which pays for JIT compilation; that cost is reported separately.
"""

import argparse
import time

import numpy as np

from motocell import _kernels
from motocell.root_system import build_cartan

CASES = [
    # (family, rank, omitted nodes or None for a regular orbit, track)
    ("A", 5, [3], True),
    ("E", 6, [1], True),
    ("E", 7, [7], True),
    ("E", 8, [8], True),
    ("E", 6, None, False),
    ("F", 4, None, False),
    ("E", 7, None, False),
]


def _run(cartan, start, track, backend):
    total = 0
    for weights, _ in _kernels.orbit_levels(cartan, start, track=track, backend=backend):
        total += len(weights)
    return total


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    if _kernels.HAVE_NUMBA:
        d = build_cartan("A", 2)
        t0 = time.perf_counter()
        _kernels._expand_numba(np.array([[1, 1]]), np.eye(2, dtype=np.int64)[None], d.matrix, True)
        _kernels._expand_numba(np.array([[1, 1]]), np.empty((0, 2, 2), np.int64), d.matrix, False)
        print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.3f}s")

    print(f"{'case':<22}{'size':>10}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for family, rank, omitted, track in CASES:
        d = build_cartan(family, rank)
        start = [1] * rank if omitted is None else [int(i in omitted) for i in d.node_labels]
        label = f"{d.name} " + ("regular" if omitted is None else f"omit {omitted}")
        label += " +reps" if track else ""
        timings = {}
        for b in backends:
            timings[b], size = _best(lambda: _run(d.matrix, start, track, b), args.repeat)
        row = f"{label:<22}{size:>10}" + "".join(f"{timings[b]:>11.3f}s" for b in backends)
        if "numba" in timings:
            row += f"{timings['numpy'] / timings['numba']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
