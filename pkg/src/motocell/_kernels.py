"""Weight-orbit BFS kernels.

The inner loop (apply every length-raising simple reflection to a BFS level)
has a numba implementation and a vectorized numpy one.  Both produce the same
rows in the same order.  Set ``MOTOCELL_DISABLE_NUMBA=1`` to force numpy.

Without an explicit backend, levels smaller than ``NUMBA_MIN_ROWS`` go to
numpy: small orbits finish before the JIT (or its cache load) would pay off.
"""

from __future__ import annotations

import os

import numpy as np

from motocell.errors import ResourceLimit

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
_DISABLED = os.environ.get("MOTOCELL_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")
BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"
NUMBA_MIN_ROWS = 4096


def _expand_py(weights, elems, cartan, track):
    m, r = weights.shape
    count = 0
    for a in range(m):
        for i in range(r):
            if weights[a, i] > 0:
                count += 1
    out_w = np.empty((count, r), np.int64)
    out_e = np.empty((count if track else 0, r, r), np.int64)
    k = 0
    for a in range(m):
        for i in range(r):
            c = weights[a, i]
            if c > 0:
                # s_i(mu) = mu - <mu, alpha_i^vee> alpha_i, alpha_i = column i in weight coords
                for j in range(r):
                    out_w[k, j] = weights[a, j] - c * cartan[j, i]
                if track:
                    # left-multiply by s_i in the simple-root basis
                    for col in range(r):
                        s = 0
                        for t in range(r):
                            s += cartan[i, t] * elems[a, t, col]
                        for row in range(r):
                            out_e[k, row, col] = elems[a, row, col]
                        out_e[k, i, col] -= s
                k += 1
    return out_w, out_e


_expand_numba = numba.njit(cache=True)(_expand_py) if HAVE_NUMBA else None


def _expand_numpy(weights, elems, cartan, track):
    r = weights.shape[1]
    rows, gens = np.nonzero(weights > 0)
    coeff = weights[rows, gens]
    out_w = weights[rows] - coeff[:, None] * cartan[:, gens].T
    if not track:
        return out_w, np.empty((0, r, r), np.int64)
    out_e = elems[rows].copy()
    shift = np.einsum("kt,ktc->kc", cartan[gens], out_e)
    out_e[np.arange(len(rows)), gens, :] -= shift
    return out_w, out_e


def expand_level(weights, elems, cartan, track, backend=None):
    if backend is None:
        backend = BACKEND if len(weights) >= NUMBA_MIN_ROWS else "numpy"
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return _expand_numba(weights, elems, cartan, track)
    if backend == "numpy":
        return _expand_numpy(weights, elems, cartan, track)
    raise ValueError(f"unknown backend {backend!r}")


def unique_rows(rows):
    """``np.unique(rows, axis=0, return_index=True)``, via packed int64 keys when they fit."""
    lo = rows.min(axis=0)
    span = rows.max(axis=0) - lo + 1
    if float(np.prod(span.astype(np.float64))) >= 2.0**62:
        return np.unique(rows, axis=0, return_index=True)
    # mixed radix with the first column most significant keeps lexicographic order
    radix = np.ones(len(span), dtype=np.int64)
    for j in range(len(span) - 2, -1, -1):
        radix[j] = radix[j + 1] * span[j + 1]
    keys = (rows - lo) @ radix
    _, idx = np.unique(keys, return_index=True)
    return rows[idx], idx


def orbit_levels(cartan, start, track=True, budget=None, backend=None):
    """BFS over the W-orbit of a dominant weight, one array per length.

    Yields ``(weights, elems)`` per level.  ``elems[k]`` is the matrix (simple
    root basis) of the minimal coset representative carrying ``start`` to
    ``weights[k]``.  Rows within a level are sorted lexicographically by weight.
    """
    cartan = np.ascontiguousarray(cartan, dtype=np.int64)
    r = cartan.shape[0]
    weights = np.asarray(start, dtype=np.int64).reshape(1, r)
    if np.any(weights < 0):
        raise ValueError("start weight must be dominant")
    elems = np.eye(r, dtype=np.int64).reshape(1, r, r) if track else np.empty((0, r, r), np.int64)
    total = 1
    while len(weights):
        yield weights, (elems if track else None)
        cand_w, cand_e = expand_level(weights, elems, cartan, track, backend)
        if not len(cand_w):
            return
        weights, idx = unique_rows(cand_w)
        if track:
            elems = cand_e[idx]
        total += len(weights)
        if budget is not None and total > budget:
            raise ResourceLimit(f"orbit exceeds budget of {budget} elements")
