"""Box-scan kernels for characteristic-vector enumeration.

The scan visits every integer vector ``x`` with ``x[i] = lo[i] + 2*t``,
``0 <= t < counts[i]`` in lexicographic order, and keeps per class the
smallest numerator ``x^t adj x`` not exceeding ``limit``.  The class of
``x`` is ``crow . x mod p``.  Ties keep the first (lexicographically
smallest) vector.

Two implementations share this contract:

* ``scan_box_numba``: ``@njit`` int64 loop, used when numba imports and
  every intermediate provably fits in int64;
* ``scan_box_numpy``: blocked numpy evaluation, also used with
  ``dtype=object`` when int64 could overflow.

Set ``H2OBSTRUCT_DISABLE_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import math
import os

import numpy as np

INT64_SAFE = 2 ** 62
BLOCK = 1 << 18

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None


def numba_enabled() -> bool:
    if numba is None:
        return False
    return os.environ.get("H2OBSTRUCT_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")


def _scan_box_loop(lo, counts, adj, crow, p, limit, best, best_xi):
    k = lo.shape[0]
    x = lo.copy()
    idx = np.zeros(k, dtype=np.int64)
    total = 1
    for i in range(k):
        total *= counts[i]
    for _ in range(total):
        num = 0
        for i in range(k):
            s = 0
            for j in range(k):
                s += adj[i, j] * x[j]
            num += x[i] * s
        if num <= limit:
            c = 0
            for i in range(k):
                c += crow[i] * x[i]
            c %= p
            if num < best[c]:
                best[c] = num
                for i in range(k):
                    best_xi[c, i] = x[i]
        # odometer, last coordinate fastest
        i = k - 1
        while i >= 0:
            idx[i] += 1
            x[i] += 2
            if idx[i] < counts[i]:
                break
            idx[i] = 0
            x[i] = lo[i]
            i -= 1


if numba is not None:
    _scan_box_jit = numba.njit(cache=True)(_scan_box_loop)
else:  # pragma: no cover
    _scan_box_jit = None


def scan_box_numba(lo, counts, adj, crow, p, limit):
    k = len(lo)
    best = np.full(p, limit + 1, dtype=np.int64)
    best_xi = np.zeros((p, k), dtype=np.int64)
    if k == 0:
        if 0 <= limit:
            best[0] = 0
        return best, best_xi
    _scan_box_jit(np.asarray(lo, dtype=np.int64), np.asarray(counts, dtype=np.int64),
                  np.asarray(adj, dtype=np.int64), np.asarray(crow, dtype=np.int64),
                  np.int64(p), np.int64(limit), best, best_xi)
    return best, best_xi


def _axis_values(lo, counts, dtype):
    return [np.array([lo[i] + 2 * t for t in range(counts[i])], dtype=dtype)
            for i in range(len(lo))]


def scan_box_numpy(lo, counts, adj, crow, p, limit, dtype=np.int64):
    """Blocked vectorized scan.

    The trailing axes form an inner grid of at most ``BLOCK`` points that
    is evaluated in one shot; the leading axes are iterated in Python.
    """
    k = len(lo)
    best = np.full(p, limit + 1, dtype=dtype)
    best_xi = np.zeros((p, k), dtype=dtype)
    if k == 0:
        if 0 <= limit:
            best[0] = 0
        return best, best_xi

    adj = np.array(adj, dtype=dtype).reshape(k, k)
    crow = np.array(crow, dtype=dtype)
    axes = _axis_values(lo, counts, dtype)

    split = k
    size = 1
    while split > 0 and size * counts[split - 1] <= BLOCK:
        split -= 1
        size *= counts[split]
    if split == k:
        split = k - 1  # at least one inner axis

    inner_axes = axes[split:]
    grids = np.meshgrid(*inner_axes, indexing="ij")
    inner = np.stack([g.ravel() for g in grids], axis=1)  # lex order
    A_in = adj[split:, split:]
    inner_quad = (inner * (inner @ A_in)).sum(axis=1)
    inner_cls = inner @ crow[split:]
    A_cross = adj[:split, split:]

    def outer_points():
        if split == 0:
            yield np.zeros(0, dtype=dtype)
            return
        shape = [counts[i] for i in range(split)]
        for flat in range(math.prod(shape)):
            pos = np.unravel_index(flat, shape)
            yield np.array([axes[i][pos[i]] for i in range(split)], dtype=dtype)

    for xo in outer_points():
        if split:
            oq = (xo @ adj[:split, :split]) @ xo
            num = inner_quad + 2 * (inner @ (xo @ A_cross)) + oq
            cls = (inner_cls + xo @ crow[:split]) % p
        else:
            num = inner_quad
            cls = inner_cls % p
        keep = np.nonzero(num <= limit)[0]
        if keep.size == 0:
            continue
        num_k = num[keep]
        cls_k = cls[keep]
        # stable sort by (class, numerator): ties stay in lex order
        if dtype == object:
            order = np.array(sorted(range(keep.size), key=lambda t: (cls_k[t], num_k[t])),
                             dtype=np.int64)
        else:
            order = np.lexsort((num_k, cls_k))
        cls_sorted = cls_k[order]
        first = np.concatenate(([True], cls_sorted[1:] != cls_sorted[:-1]))
        for t in order[first]:
            c = int(cls_k[t])
            if num_k[t] < best[c]:
                best[c] = num_k[t]
                xi = inner[keep[t]]
                best_xi[c, :split] = xo
                best_xi[c, split:] = xi
    return best, best_xi


def int64_safe(lo, counts, adj, crow, p, limit) -> bool:
    """True when every quantity the scan forms fits comfortably in int64."""
    r = [max(abs(lo[i]), abs(lo[i] + 2 * (counts[i] - 1))) for i in range(len(lo))]
    k = len(r)
    qb = sum(abs(adj[i][j]) * r[i] * r[j] for i in range(k) for j in range(k))
    cb = sum(abs(c) * ri for c, ri in zip(crow, r)) + p
    return max(qb, cb, abs(limit) + 1, p) < INT64_SAFE


def scan_box(lo, counts, adj, crow, p, limit, backend=None):
    """Dispatch to the fastest exact backend.

    Returns ``(best, best_xi, backend_name)`` where ``best[c] > limit``
    marks an uncovered class.  ``backend`` forces ``"numba"``, ``"numpy"``
    or ``"object"``.
    """
    if any(c <= 0 for c in counts):
        k = len(lo)
        return (np.full(p, limit + 1, dtype=object), np.zeros((p, k), dtype=object),
                backend or "empty")
    safe = int64_safe(lo, counts, adj, crow, p, limit)
    if backend is None:
        if not safe:
            backend = "object"
        elif numba_enabled():
            backend = "numba"
        else:
            backend = "numpy"
    if backend in ("numba", "numpy") and not safe:
        raise OverflowError("box scan would overflow int64")
    if backend == "numba":
        if _scan_box_jit is None:
            raise RuntimeError("numba is not available")
        best, xi = scan_box_numba(lo, counts, adj, crow, p, limit)
    elif backend == "numpy":
        best, xi = scan_box_numpy(lo, counts, adj, crow, p, limit)
    elif backend == "object":
        best, xi = scan_box_numpy(lo, counts, adj, crow, p, limit, dtype=object)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return best, xi, backend
