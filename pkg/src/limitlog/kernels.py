"""Array kernels with a numba and a pure-numpy implementation.

Two hot loops live here: negative-cycle detection on a dense weight matrix
(Floyd-Warshall with an early exit) and the exhaustive scan of an integer
box used by the brute-force LIA oracle.  The backend is chosen once at import
time; set ``LIMITLOG_BACKEND=numpy`` to force the fallback, or
``LIMITLOG_BACKEND=numba`` to require the compiled one.

Both kernels work on ``int64``.  Callers check magnitudes first and fall back
to exact Python integers when a value could overflow.
"""

from __future__ import annotations

import os

import numpy as np

#: "no edge" marker; twice it still fits in int64
NO_EDGE = np.int64(1 << 61)

_requested = os.environ.get("LIMITLOG_BACKEND", "").strip().lower()

try:  # pragma: no cover - depends on the environment
    if _requested == "numpy":
        raise ImportError("numpy backend requested")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    if _requested == "numba":
        raise
    HAVE_NUMBA = False


# -- pure numpy -------------------------------------------------------------

def has_negative_cycle_numpy(w: np.ndarray) -> bool:
    d = w.copy()
    n = d.shape[0]
    for k in range(n):
        via = d[:, k, None] + d[None, k, :]
        np.minimum(d, via, out=d)
        np.minimum(d, NO_EDGE, out=d)
        if (np.diagonal(d) < 0).any():
            return True
    return False


def box_scan_numpy(a: np.ndarray, b: np.ndarray, c: np.ndarray, bound: int, maximize: bool):
    """Scan ``[-bound, bound]^n`` for points with ``a @ x <= b``.

    Returns ``(found, best, witness)``; with an all-zero ``c`` the first
    feasible point in lexicographic order is the witness.  Among optimal
    points the lexicographically first one is chosen.
    """
    n = a.shape[1]
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    if n == 0:
        ok = bool((b >= 0).all())
        return ok, 0, np.zeros(0, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    ok = (grid @ a.T <= b).all(axis=1) if a.shape[0] else np.ones(len(grid), dtype=bool)
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return False, 0, np.zeros(n, dtype=np.int64)
    vals = grid[idx] @ c
    pos = int(np.argmax(vals) if maximize else np.argmin(vals))
    return True, int(vals[pos]), grid[idx[pos]].copy()


# -- numba ------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _has_negative_cycle_jit(w):
        n = w.shape[0]
        d = w.copy()
        for k in range(n):
            for i in range(n):
                dik = d[i, k]
                if dik >= NO_EDGE:
                    continue
                for j in range(n):
                    dkj = d[k, j]
                    if dkj >= NO_EDGE:
                        continue
                    s = dik + dkj
                    if s < d[i, j]:
                        d[i, j] = s
            for i in range(n):
                if d[i, i] < 0:
                    return True
        return False

    @njit(cache=True)
    def _box_scan_jit(a, b, c, bound, maximize):
        m, n = a.shape
        x = np.full(n, -bound, dtype=np.int64)
        best_x = np.zeros(n, dtype=np.int64)
        found = False
        best = 0
        while True:
            ok = True
            for i in range(m):
                s = 0
                for j in range(n):
                    s += a[i, j] * x[j]
                if s > b[i]:
                    ok = False
                    break
            if ok:
                v = 0
                for j in range(n):
                    v += c[j] * x[j]
                if not found or (maximize and v > best) or (not maximize and v < best):
                    found = True
                    best = v
                    best_x[:] = x
            # odometer increment, last coordinate fastest
            j = n - 1
            while j >= 0:
                if x[j] < bound:
                    x[j] += 1
                    break
                x[j] = -bound
                j -= 1
            if j < 0:
                break
        return found, best, best_x

    def has_negative_cycle(w: np.ndarray) -> bool:
        return bool(_has_negative_cycle_jit(np.ascontiguousarray(w, dtype=np.int64)))

    def box_scan(a, b, c, bound, maximize):
        a = np.ascontiguousarray(a, dtype=np.int64)
        if a.shape[1] == 0:
            return box_scan_numpy(a, b, c, bound, maximize)
        found, best, x = _box_scan_jit(a, np.asarray(b, dtype=np.int64),
                                       np.asarray(c, dtype=np.int64), bound, maximize)
        return bool(found), int(best), x

    BACKEND = "numba"
else:  # pragma: no cover
    has_negative_cycle = has_negative_cycle_numpy
    box_scan = box_scan_numpy
    BACKEND = "numpy"


def has_negative_cycle_exact(w: list[list[int | None]]) -> bool:
    """Same as :func:`has_negative_cycle` over Python ints; ``None`` = no edge."""
    n = len(w)
    d = [row[:] for row in w]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik is None:
                continue
            di = d[i]
            for j in range(n):
                dkj = dk[j]
                if dkj is not None and (di[j] is None or dik + dkj < di[j]):
                    di[j] = dik + dkj
        if any(d[i][i] is not None and d[i][i] < 0 for i in range(n)):
            return True
    return False
