"""The group presented by a Goeritz matrix and its table of minimal
characteristic-vector values.

For a positive-definite ``Q`` with odd determinant ``p`` and cyclic
cokernel ``G = Z^k / Q Z^k``, class ``i`` is the class of ``i * g0`` for
a fixed generator ``g0``.  ``mq_table`` returns, per class, the exact
minimum of ``(xi^t Q^{-1} xi - k) / 4`` over characteristic ``xi`` in the
class, certified by a complete enumeration up to a radius ``B``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import _kernels
from .errors import (BoundExceeded, EvenDeterminant, EvenModulus, Indefinite,
                     NonCyclic, OutOfRange, SingularMatrix)
from .exactmat import (IntSymMatrix, SNFDecomposition, adjugate, determinant,
                       is_positive_definite, smith_normal_form)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple[int, ...]
    order: int
    cyclic: bool
    generator_vector: Optional[tuple[int, ...]]
    snf: SNFDecomposition = field(repr=False)
    # class_index(x) == class_row . x mod order; None when not cyclic
    class_row: Optional[tuple[int, ...]] = None


def _as_matrix(Q) -> IntSymMatrix:
    return Q if isinstance(Q, IntSymMatrix) else IntSymMatrix(Q)


def group_of(Q) -> FiniteAbelianGroup:
    """Invariant factors of ``coker Q`` and, when cyclic, a generator.

    The generator is the last standard basis vector whose class generates
    the group; if none does, the original-basis image of the SNF basis
    vector carrying the largest invariant factor.
    """
    Q = _as_matrix(Q)
    k = Q.k
    det = determinant(Q)
    if det == 0:
        raise SingularMatrix("Goeritz matrix is singular")
    if det % 2 == 0:
        raise EvenDeterminant(f"determinant {det} is even")
    snf = smith_normal_form(Q)
    diag = snf.diagonal
    factors = tuple(d for d in diag if d > 1)
    p = abs(det)
    if len(factors) > 1:
        return FiniteAbelianGroup(factors, p, False, None, snf, None)
    if p == 1:
        zero = (0,) * k
        return FiniteAbelianGroup(factors, 1, True, zero, snf, zero)

    t = diag.index(p)
    native = [u % p for u in snf.U[t]]
    for j in reversed(range(k)):
        if math.gcd(native[j], p) == 1:
            scale = pow(native[j], -1, p)
            row = tuple(c * scale % p for c in native)
            gen = tuple(int(i == j) for i in range(k))
            return FiniteAbelianGroup(factors, p, True, gen, snf, row)
    uinv = snf.u_inverse()
    gen = tuple(uinv[i][t] for i in range(k))
    return FiniteAbelianGroup(factors, p, True, gen, snf, tuple(native))


def class_index(xi: Sequence[int], G: FiniteAbelianGroup) -> int:
    """Index ``i`` with ``xi == i * g0`` modulo ``Q Z^k``."""
    if not G.cyclic:
        raise NonCyclic(f"group with invariant factors {list(G.invariant_factors)} is not cyclic")
    if len(xi) != len(G.class_row):
        raise ValueError("vector length does not match the matrix dimension")
    return sum(c * x for c, x in zip(G.class_row, xi)) % G.order


def is_characteristic(Q, xi: Sequence[int]) -> bool:
    Q = _as_matrix(Q)
    return len(xi) == Q.k and all((x - d) % 2 == 0 for x, d in zip(xi, Q.diagonal()))


@dataclass(frozen=True)
class MQTable:
    p: int
    k: int
    generator: tuple[int, ...]
    values: tuple[Fraction, ...]
    witnesses: tuple[tuple[int, ...], ...]
    certified_radius: int
    backend: str = field(default="", compare=False)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "generator": list(self.generator),
            "values": [str(v) for v in self.values],
            "witnesses": [list(w) for w in self.witnesses],
            "certified_radius": str(self.certified_radius),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MQTable":
        gen = tuple(d["generator"])
        return cls(p=d["p"], k=len(gen), generator=gen,
                   values=tuple(Fraction(v) for v in d["values"]),
                   witnesses=tuple(tuple(w) for w in d["witnesses"]),
                   certified_radius=int(Fraction(d["certified_radius"])))


def char_box(Q: IntSymMatrix, B: int) -> tuple[list[int], list[int]]:
    """Start values and step-2 counts of the characteristic box.

    ``|xi_i| <= isqrt(B * Q_ii)`` holds for every ``xi`` with
    ``xi^t Q^{-1} xi <= B`` because ``x^t A x >= x_i^2 / (A^{-1})_ii``
    for positive-definite ``A``.
    """
    lo, counts = [], []
    for d in Q.diagonal():
        r = math.isqrt(B * d)
        start = -r if (r - d) % 2 == 0 else -r + 1
        lo.append(start)
        counts.append((r - start) // 2 + 1 if start <= r else 0)
    return lo, counts


def mq_table(Q, G: FiniteAbelianGroup, max_bound: Optional[int] = None,
             backend: Optional[str] = None) -> MQTable:
    """Certified exact minima per class.

    Starts at ``B = max(trace Q, k)`` and doubles until every class has a
    characteristic vector with ``xi^t Q^{-1} xi <= B``; the box scan at
    radius ``B`` is complete, so the per-class minima found are exact.
    """
    Q = _as_matrix(Q)
    if not is_positive_definite(Q):
        raise Indefinite("matrix is not positive definite")
    if not G.cyclic:
        raise NonCyclic("M_Q tabulation needs a cyclic group")
    k, p = Q.k, G.order
    det = determinant(Q)
    adj = adjugate(Q)
    B = max(Q.trace(), k, 1)
    while True:
        if max_bound is not None and B > max_bound:
            raise BoundExceeded(f"enumeration bound {B} exceeds the limit {max_bound}")
        lo, counts = char_box(Q, B)
        limit = B * det
        best, best_xi, used = _kernels.scan_box(lo, counts, adj, list(G.class_row), p, limit,
                                                backend=backend)
        if all(int(b) <= limit for b in best):
            break
        B *= 2
    values = tuple(Fraction(int(b) - k * det, 4 * det) for b in best)
    witnesses = tuple(tuple(int(x) for x in row) for row in best_xi)
    return MQTable(p, k, tuple(G.generator_vector), values, witnesses, B, used)


def certified_box_radius(Q, table: MQTable) -> int:
    """Largest coordinate bound of the box the table was certified on."""
    Q = _as_matrix(Q)
    return max((math.isqrt(table.certified_radius * d) for d in Q.diagonal()), default=0)


def _inverse_scaled(Q: IntSymMatrix) -> tuple[list[list[int]], int]:
    """``(det * Q^{-1}, det)`` by Gauss-Jordan over the rationals."""
    k = Q.k
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
         for i, row in enumerate(Q.rows)]
    for c in range(k):
        r = next(r for r in range(c, k) if A[r][c] != 0)
        A[c], A[r] = A[r], A[c]
        piv = A[c][c]
        A[c] = [a / piv for a in A[c]]
        for r in range(k):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    inv = [row[k:] for row in A]
    den = 1
    for row in inv:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [[int(x * den) for x in row] for row in inv], den


def mq_bruteforce(Q, G: FiniteAbelianGroup, radius: int) -> dict[int, tuple[Fraction, tuple[int, ...]]]:
    """Uncertified per-class minima over the box ``|xi_i| <= radius``.

    Test oracle.  Shares nothing with :func:`mq_table` beyond the
    generator ``g0``: the inverse comes from Gauss-Jordan elimination and
    classes are matched by ``Q^{-1} xi mod Z^k``.
    """
    Q = _as_matrix(Q)
    k = Q.k
    if k == 0:
        return {0: (Fraction(0), ())}
    S, den = _inverse_scaled(Q)

    def apply(x):
        return [sum(a * b for a, b in zip(row, x)) for row in S]

    g = G.generator_vector
    Sg = apply(g)
    key_to_class = {}
    for i in range(G.order):
        key_to_class.setdefault(tuple(i * s % den for s in Sg), i)

    ranges = [range(-radius + ((radius + d) % 2), radius + 1, 2) for d in Q.diagonal()]
    out: dict[int, tuple[Fraction, tuple[int, ...]]] = {}
    for xi in itertools.product(*ranges):
        y = apply(xi)
        cls = key_to_class[tuple(v % den for v in y)]
        val = Fraction(sum(a * b for a, b in zip(xi, y)), den)
        val = (val - k) / 4
        if cls not in out or val < out[cls][0]:
            out[cls] = (val, tuple(xi))
    return out


def closed_form_rank1(p: int, i: int) -> Fraction:
    """Minimum for the 1x1 form ``(p)`` on class ``i``, with ``0 <= i < p``.

    ``((p + (-1)^i p)/2 - i)`` is the odd representative of ``i`` closest
    to zero, so the value is ``(that^2 / p - 1) / 4``.
    """
    if p < 1:
        raise ValueError("p must be positive")
    if p % 2 == 0:
        raise EvenModulus(f"modulus {p} is even")
    if not 0 <= i < p:
        raise OutOfRange(f"class {i} outside [0, {p})")
    s = (p + (-1) ** i * p) // 2 - i
    return (Fraction(s * s, p) - 1) / 4
