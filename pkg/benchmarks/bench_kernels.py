#!/usr/bin/env python3
"""Benchmark the compiled kernel loops against the pure-NumPy fallback.

Runs the dominant operation of the Lebesgue experiments (weighted |kernel|
sums over nodes x evaluation points) plus a plain batched kernel
evaluation, on both backends in one process, and prints a small table.

    python benchmarks/bench_kernels.py [--n 25] [--repeat 3]
"""

import argparse
import time

import numpy as np

from sphereproj import kernels_py
from sphereproj.orthopoly import _recurrence
from sphereproj.pointsets import spiral_points
from sphereproj.quadrature import tensor_gl_rule

try:
    from sphereproj import _kernels as kernels_cy
except ImportError:
    kernels_cy = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=25, help="projection degree")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    n = args.n
    rule = tensor_gl_rule(n)
    pts = spiral_points(4 * len(rule)).points
    b, p1, p0 = _recurrence(2, n)
    t = np.ascontiguousarray((pts[: 2 ** 20] @ rule.nodes[:64].T).reshape(-1))

    print("degree n=%d, nodes N=%d, eval points M=%d, kernel batch %d" % (n, len(rule), len(pts), t.size))
    backends = [("python", kernels_py)]
    if kernels_cy is not None:
        backends.insert(0, ("cython", kernels_cy))
    else:
        print("compiled extension not available; timing the fallback only")

    rows = []
    baseline = {}
    for name, impl in backends:
        dt_sum, sums = _time(
            lambda: impl.weighted_abs_kernel_sums(rule.nodes, rule.weights, b, p1, p0, pts, 1.0),
            args.repeat,
        )
        dt_val, vals = _time(lambda: impl.kernel_values(b, p1, p0, t), args.repeat)
        rows.append((name, dt_sum, dt_val, sums, vals))
        baseline[name] = (dt_sum, dt_val)

    print()
    print("%-8s %-28s %-28s" % ("backend", "weighted |K| sums", "kernel batch"))
    for name, dt_sum, dt_val, _, _ in rows:
        print("%-8s %-28s %-28s" % (name, "%.3f s" % dt_sum, "%.3f s" % dt_val))
    if len(rows) == 2:
        speed_sum = baseline["python"][0] / baseline["cython"][0]
        speed_val = baseline["python"][1] / baseline["cython"][1]
        dev_sum = np.max(np.abs(rows[0][3] - rows[1][3]) / np.abs(rows[0][3]))
        dev_val = np.max(np.abs(rows[0][4] - rows[1][4]))
        print()
        print("speedup: %.1fx (sums), %.1fx (batch)" % (speed_sum, speed_val))
        print("agreement: %.2e rel (sums), %.2e abs (batch)" % (dev_sum, dev_val))


if __name__ == "__main__":
    main()
