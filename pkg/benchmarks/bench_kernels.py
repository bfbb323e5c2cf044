"""Compare the box-scan backends on the scans mq_table actually runs.

    python benchmarks/bench_kernels.py [--repeat N] [--scale S]

For each matrix the certified radius B is taken from mq_table, then the
same box is scanned by the numba, numpy and object backends.  ``--scale``
multiplies B to make the boxes bigger.  Results must agree exactly.
"""

import argparse
import time

import numpy as np

from h2obstruct import _kernels
from h2obstruct.exactmat import IntSymMatrix, adjugate, determinant
from h2obstruct.quadform import char_box, group_of, mq_table

CASES = {
    "P(13,4,11)": [[17, -4], [-4, 15]],
    "P(25,9,23)": [[34, -9], [-9, 32]],
    "k=3": [[9, 2, -3], [2, 11, 4], [-3, 4, 14]],
    "k=4": [[7, 1, 0, 2], [1, 8, -2, 1], [0, -2, 8, 3], [2, 1, 3, 7]],
}


def scan_args(Q, scale):
    Q = IntSymMatrix(Q)
    G = group_of(Q)
    B = mq_table(Q, G).certified_radius * scale
    lo, counts = char_box(Q, B)
    return lo, counts, adjugate(Q), list(G.class_row), G.order, B * determinant(Q)


def timed(args, backend, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = _kernels.scan_box(*args, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=int, default=4)
    opts = ap.parse_args()

    backends = ["numpy", "object"]
    if _kernels.numba is not None:
        backends.insert(0, "numba")
        _kernels.scan_box([-1], [2], [[1]], [1], 1, 1, backend="numba")  # compile once
    else:
        print("numba not installed; skipping the jit backend")

    print(f"{'case':<12}{'points':>12}" + "".join(f"{b:>12}" for b in backends))
    for name, Q in CASES.items():
        args = scan_args(Q, opts.scale)
        points = int(np.prod(args[1]))
        results = {b: timed(args, b, opts.repeat) for b in backends}
        ref = results[backends[-1]][1]
        for b, (_, out) in results.items():
            assert [int(v) for v in out[0]] == [int(v) for v in ref[0]], b
            assert np.array_equal(np.asarray(out[1], dtype=object),
                                  np.asarray(ref[1], dtype=object)), b
        row = "".join(f"{results[b][0] * 1e3:>10.1f}ms" for b in backends)
        print(f"{name:<12}{points:>12}{row}")


if __name__ == "__main__":
    main()
