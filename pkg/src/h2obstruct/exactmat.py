"""Exact integer linear algebra on small dense matrices.

Everything here works on Python ints (arbitrary precision); rational
results are :class:`fractions.Fraction`.  No floating point is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import SingularMatrix

Matrix = list[list[int]]


class IntSymMatrix:
    """Immutable square symmetric integer matrix.

    Accepts any nested sequence of integers; symmetry is checked on
    construction.  ``IntSymMatrix([])`` is the empty ``0 x 0`` matrix.
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(_as_int(x) for x in row) for row in rows)
        k = len(rows)
        for row in rows:
            if len(row) != k:
                raise ValueError("matrix must be square")
        for i in range(k):
            for j in range(i + 1, k):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "_rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntSymMatrix is immutable")

    @property
    def k(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __len__(self):
        return len(self._rows)

    def __eq__(self, other):
        if isinstance(other, IntSymMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self):
        return hash(self._rows)

    def __neg__(self):
        return IntSymMatrix([[-x for x in row] for row in self._rows])

    def __repr__(self):
        return f"IntSymMatrix({self.tolist()!r})"

    def tolist(self) -> Matrix:
        return [list(row) for row in self._rows]

    def diagonal(self) -> list[int]:
        return [self._rows[i][i] for i in range(self.k)]

    def trace(self) -> int:
        return sum(self.diagonal())

    def congruent(self, W: Sequence[Sequence[int]]) -> "IntSymMatrix":
        """Return ``W^t M W``."""
        return IntSymMatrix(matmul(transpose(W), matmul(self.tolist(), W)))


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    # numpy integers and friends
    if hasattr(x, "__index__"):
        return x.__index__()
    raise TypeError(f"non-integer matrix entry {x!r}")


def _rows_of(M) -> Matrix:
    if isinstance(M, IntSymMatrix):
        return M.tolist()
    return [[_as_int(x) for x in row] for row in M]


def identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def transpose(A) -> Matrix:
    A = _rows_of(A)
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B) -> Matrix:
    A, B = _rows_of(A), _rows_of(B)
    if not A:
        return []
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in _rows_of(A)]


def quad(A, x: Sequence[int]) -> int:
    """``x^t A x`` for an integer matrix ``A``."""
    return sum(xi * yi for xi, yi in zip(x, matvec(A, x)))


def determinant(M) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    A = _rows_of(M)
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for t in range(n - 1):
        if A[t][t] == 0:
            for r in range(t + 1, n):
                if A[r][t] != 0:
                    A[t], A[r] = A[r], A[t]
                    sign = -sign
                    break
            else:
                return 0
        piv = A[t][t]
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                # exact by Sylvester's identity
                A[i][j] = (A[i][j] * piv - A[i][t] * A[t][j]) // prev
            A[i][t] = 0
        prev = piv
    return sign * A[n - 1][n - 1]


def _minor(A: Matrix, i: int, j: int) -> Matrix:
    return [row[:j] + row[j + 1:] for r, row in enumerate(A) if r != i]


def adjugate(M) -> Matrix:
    """Classical adjoint; ``M @ adjugate(M) == det(M) * I``."""
    A = _rows_of(M)
    n = len(A)
    if n == 0:
        return []
    if n == 1:
        return [[1]]
    return [[(-1) ** (i + j) * determinant(_minor(A, j, i)) for j in range(n)]
            for i in range(n)]


def is_positive_definite(M) -> bool:
    """Sylvester's criterion on exact leading principal minors."""
    A = _rows_of(M)
    return all(determinant([row[:m] for row in A[:m]]) > 0
               for m in range(1, len(A) + 1))


def eval_inverse_form(M, x: Sequence[int]) -> Fraction:
    """Exact ``x^t M^{-1} x``, computed as ``x^t adj(M) x / det(M)``."""
    A = _rows_of(M)
    if len(x) != len(A):
        raise ValueError(f"vector has length {len(x)}, matrix is {len(A)}x{len(A)}")
    det = determinant(A)
    if det == 0:
        raise SingularMatrix("matrix has determinant 0")
    return Fraction(quad(adjugate(A), x), det)


@dataclass(frozen=True)
class SNFDecomposition:
    """``U @ source @ V == D`` with ``U``, ``V`` unimodular."""

    source: tuple
    U: tuple
    D: tuple
    V: tuple

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(len(self.D))]

    def u_inverse(self) -> Matrix:
        return _unimodular_inverse(self.U)


def _unimodular_inverse(U) -> Matrix:
    U = _rows_of(U)
    det = determinant(U)
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return [[det * a for a in row] for row in adjugate(U)]


def smith_normal_form(M) -> SNFDecomposition:
    """Smith normal form with transformation matrices.

    Pivot is the smallest nonzero entry in absolute value of the trailing
    block, first in row-major order, so the output is deterministic.
    """
    A = _rows_of(M)
    n = len(A)
    U = identity(n)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        for R in (A, U):
            R[dst] = [a + c * b for a, b in zip(R[dst], R[src])]

    def add_col(dst, src, c):
        for R in (A, V):
            for row in R:
                row[dst] += c * row[src]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    a = abs(A[i][j])
                    if a and (best is None or a < best[0]):
                        best = (a, i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, n):
                q = A[i][t] // piv
                if q:
                    add_row(i, t, -q)
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    add_col(j, t, -q)
                if A[t][j]:
                    dirty = True
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if A[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            U[t] = [-a for a in U[t]]
            A[t] = [-a for a in A[t]]

    freeze = lambda R: tuple(tuple(row) for row in R)  # noqa: E731
    return SNFDecomposition(freeze(_rows_of(M)), freeze(U), freeze(A), freeze(V))
