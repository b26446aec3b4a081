"""Kernel backend selection: compiled extension if available, NumPy otherwise.

Set SPHEREPROJ_BACKEND=python to force the fallback (e.g. for benchmarking),
or SPHEREPROJ_BACKEND=cython to fail loudly when the extension is missing.
SPHEREPROJ_THREADS caps the number of worker threads used to map kernel
reductions over evaluation-point chunks (default: single-threaded).
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import kernels_py

_requested = os.environ.get("SPHEREPROJ_BACKEND", "").strip().lower()

if _requested == "python":
    _impl = kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        _impl = kernels_py
        BACKEND = "python"

kernel_values = _impl.kernel_values
weighted_kernel_sums = _impl.weighted_kernel_sums
weighted_abs_kernel_sums = _impl.weighted_abs_kernel_sums
abs_row_sums = _impl.abs_row_sums


def backend_name() -> str:
    return BACKEND


def thread_count() -> int:
    raw = os.environ.get("SPHEREPROJ_THREADS", "")
    try:
        count = int(raw)
    except ValueError:
        return 1
    return max(1, count)


def map_point_chunks(func, points, chunk=4096):
    """Apply `func` to row chunks of `points` and concatenate, in index order.

    Chunks are independent, so the result does not depend on the worker
    count; SPHEREPROJ_THREADS only changes how many run concurrently.
    """
    points = np.ascontiguousarray(points, dtype=float)
    blocks = [points[s : s + chunk] for s in range(0, points.shape[0], chunk)]
    if len(blocks) <= 1:
        return func(points)
    workers = thread_count()
    if workers == 1:
        return np.concatenate([func(b) for b in blocks])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.concatenate(list(pool.map(func, blocks)))
