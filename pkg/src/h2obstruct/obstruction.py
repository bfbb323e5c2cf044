"""Obstructions to unknotting by a single twisted band.

``theorem_check`` compares a certified M_Q table against the values of the
rank-one form ``(p)``: if some unit ``a`` and sign ``eps`` make

    I(i) = eps * M_Q(a*i) - closed_form_rank1(p, i)

an even integer that is ``<= 0`` for every class ``i``, the knot is not
obstructed.  ``lickorish_check`` asks whether some generator ``g`` has
linking form ``+-1/p``.  ``u2_bounds`` combines both with crosscap data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .diagram import GoeritzResult
from .errors import InconsistentBounds, OracleMismatch
from .exactmat import eval_inverse_form
from .quadform import (FiniteAbelianGroup, MQTable, certified_box_radius,
                       closed_form_rank1, group_of, mq_bruteforce, mq_table)

OBSTRUCTED = "obstructed"
NOT_OBSTRUCTED = "not_obstructed"
VACUOUS = "vacuous"

NOT_INTEGER = "not_integer"
ODD_INTEGER = "odd_integer"
POSITIVE_VALUE = "positive_value"


@dataclass(frozen=True)
class Trial:
    epsilon: int
    a: int
    passed: bool
    i: Optional[int] = None
    kind: Optional[str] = None
    value: Optional[Fraction] = None

    def to_dict(self) -> dict:
        d = {"epsilon": self.epsilon, "a": self.a, "outcome": "pass" if self.passed else "fail"}
        if not self.passed:
            d.update(i=self.i, kind=self.kind, I=str(self.value))
        return d


@dataclass(frozen=True)
class TheoremReport:
    verdict: str
    reason: Optional[str]
    trials: tuple[Trial, ...] = ()
    witness: Optional[tuple[int, int]] = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "witness": None if self.witness is None else
            {"epsilon": self.witness[0], "a": self.witness[1]},
            "trials": [t.to_dict() for t in self.trials],
        }


def units(p: int) -> list[int]:
    return [a for a in range(1, p) if math.gcd(a, p) == 1]


def _scaled(values, p):
    # 4p * value is an integer for every table value and closed-form term
    out = []
    for v in values:
        s = v * 4 * p
        if s.denominator != 1:
            raise OracleMismatch(f"table value {v} has denominator not dividing 4p")
        out.append(int(s))
    return out


def theorem_check(table: MQTable, full: bool = False) -> TheoremReport:
    """Run every ``(eps, a)`` trial in fixed order (``eps = +1`` first,
    units ascending) and record the first failing class of each.

    Failure kinds are checked integrality, then parity, then sign.  Only
    classes ``0..(p-1)/2`` are scanned since ``I(i) == I(p - i)``; pass
    ``full=True`` to scan all of them.
    """
    p = table.p
    if p == 1:
        return TheoremReport(VACUOUS, "order_one")
    M = _scaled(table.values, p)
    T = _scaled([closed_form_rank1(p, i) for i in range(p)], p)
    big = max(max(map(abs, M)), max(map(abs, T))) >= 2 ** 60
    dtype = object if big else np.int64
    M = np.array(M, dtype=dtype)
    T = np.array(T, dtype=dtype)
    top = p if full else (p - 1) // 2 + 1
    ivec = np.arange(top, dtype=np.int64)
    Ti = T[:top]
    unit_mod, even_mod = 4 * p, 8 * p

    trials = []
    witness = None
    for eps in (1, -1):
        for a in units(p):
            vals = eps * M[(a * ivec) % p] - Ti
            not_int = vals % unit_mod != 0
            odd = ~not_int & (vals % even_mod != 0)
            positive = ~not_int & ~odd & (vals > 0)
            fail = not_int | odd | positive
            if not fail.any():
                trials.append(Trial(eps, a, True))
                if witness is None:
                    witness = (eps, a)
                continue
            i = int(np.argmax(fail))
            kind = NOT_INTEGER if not_int[i] else ODD_INTEGER if odd[i] else POSITIVE_VALUE
            trials.append(Trial(eps, a, False, i, kind, Fraction(int(vals[i]), unit_mod)))
    if witness is None:
        return TheoremReport(OBSTRUCTED, "all_pairs_fail", tuple(trials))
    return TheoremReport(NOT_OBSTRUCTED, None, tuple(trials), witness)


def noncyclic_theorem_report() -> TheoremReport:
    return TheoremReport(OBSTRUCTED, "noncyclic_group")


def replay_witness(table: MQTable, epsilon: int, a: int) -> bool:
    """Straight-line check of one ``(eps, a)`` over every class."""
    p = table.p
    for i in range(p):
        I = epsilon * table.values[a * i % p] - closed_form_rank1(p, i)
        if I.denominator != 1 or I.numerator % 2 or I > 0:
            return False
    return True


@dataclass(frozen=True)
class LickorishReport:
    verdict: str
    cyclic: bool
    lambda_value: Optional[Fraction] = None
    solution_x: Optional[int] = None
    # +1 or -1: the value q*x^2 takes mod p at the solution
    achieved_sign: Optional[int] = None

    @property
    def achieved(self) -> Optional[Fraction]:
        """``lambda(x g0, x g0)`` in ``[0, 1)``."""
        if self.solution_x is None:
            return None
        return (self.lambda_value * self.solution_x ** 2) % 1

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "cyclic": self.cyclic,
            "lambda": None if self.lambda_value is None else str(self.lambda_value),
            "x": self.solution_x,
            "achieved": None if self.achieved is None else str(self.achieved),
        }


def lickorish_check(g: GoeritzResult, G: FiniteAbelianGroup) -> LickorishReport:
    """Search ``x`` in ``[0, p)`` with ``q x^2 = +-1 (mod p)`` where
    ``lambda(g0, g0) = q/p``."""
    if not G.cyclic:
        return LickorishReport(OBSTRUCTED, False)
    p = G.order
    if p == 1:
        return LickorishReport(NOT_OBSTRUCTED, True, Fraction(0), 0, 1)
    lam = eval_inverse_form(g.Q, G.generator_vector) % 1
    q = int(lam * p)
    if p < 2 ** 20:
        x = np.arange(p, dtype=np.int64)
        r = (q * (x * x % p)) % p
        hits = np.nonzero((r == 1) | (r == p - 1))[0]
        sol = int(hits[0]) if hits.size else None
    else:
        sol = next((x for x in range(p) if q * x * x % p in (1, p - 1)), None)
    if sol is None:
        return LickorishReport(OBSTRUCTED, True, lam)
    sign = 1 if q * sol * sol % p == 1 else -1
    return LickorishReport(NOT_OBSTRUCTED, True, lam, sol, sign)


@dataclass(frozen=True)
class BoundsReport:
    lower: int
    upper: Optional[int]
    inputs_used: dict = field(default_factory=dict, compare=False)

    @property
    def exact(self) -> Optional[int]:
        return self.lower if self.upper is not None and self.lower == self.upper else None

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact,
                "inputs_used": dict(self.inputs_used)}


def u2_bounds(thm: TheoremReport, lick: LickorishReport, p: int,
              gamma: Optional[int] = None, gamma_star: Optional[int] = None,
              known_band_count: Optional[int] = None) -> BoundsReport:
    """Sandwich the H(2)-unknotting number.

    Lower: 1 for a nontrivial determinant, 2 when either obstruction
    fires, and the 4-dimensional crosscap number.  Upper: the crosscap
    number or a known sequence of band moves.
    """
    for name, v in (("gamma", gamma), ("gamma_star", gamma_star), ("bands", known_band_count)):
        if v is not None and v < 0:
            raise InconsistentBounds(f"{name} must be non-negative")
    if gamma is not None and gamma_star is not None and gamma_star > gamma:
        raise InconsistentBounds(f"gamma_star {gamma_star} exceeds gamma {gamma}")
    used = {
        "determinant": p != 1,
        "theorem_obstruction": thm.verdict == OBSTRUCTED,
        "lickorish_obstruction": lick.verdict == OBSTRUCTED,
        "gamma": gamma is not None,
        "gamma_star": gamma_star is not None,
        "known_band_count": known_band_count is not None,
    }
    lower = 0
    if p != 1:
        lower = 1
    if used["theorem_obstruction"] or used["lickorish_obstruction"]:
        lower = 2
    if gamma_star is not None:
        lower = max(lower, gamma_star)
    uppers = [v for v in (gamma, known_band_count) if v is not None]
    upper = min(uppers) if uppers else None
    if upper is not None and lower > upper:
        raise InconsistentBounds(f"lower bound {lower} exceeds upper bound {upper}")
    return BoundsReport(lower, upper, used)


CSV_COLUMNS = ("p", "q", "r", "det", "theorem", "lickorish", "lower", "upper", "skip_reason")


@dataclass(frozen=True)
class ObstructionReport:
    goeritz: GoeritzResult
    group: FiniteAbelianGroup
    table: Optional[MQTable]
    theorem: TheoremReport
    lickorish: LickorishReport
    bounds: BoundsReport

    @property
    def p(self) -> int:
        return self.group.order

    def to_dict(self) -> dict:
        G = self.group
        return {
            "input": self.goeritz.describe(),
            "Q": self.goeritz.Q.tolist(),
            "mirrored": self.goeritz.mirrored,
            "p": self.p,
            "group": {"invariant_factors": list(G.invariant_factors), "cyclic": G.cyclic},
            "generator": None if G.generator_vector is None else list(G.generator_vector),
            "mq_table": None if self.table is None else self.table.to_dict(),
            "theorem": self.theorem.to_dict(),
            "lickorish": self.lickorish.to_dict(),
            "u2_bounds": self.bounds.to_dict(),
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def csv_row(self) -> dict:
        prov = self.goeritz.provenance
        pqr = prov[1] if prov[0] == "pretzel" else ("", "", "")
        b = self.bounds
        return dict(zip(CSV_COLUMNS, (*pqr, self.goeritz.determinant, self.theorem.verdict,
                                      self.lickorish.verdict, b.lower,
                                      "" if b.upper is None else b.upper, "")))

    def to_text(self) -> str:
        g, G, b = self.goeritz, self.group, self.bounds
        lines = [
            f"input: {json.dumps(g.describe())}",
            f"Goeritz matrix: {g.Q.tolist()}" + ("  (mirror image)" if g.mirrored else ""),
            f"determinant: {g.determinant}",
        ]
        if G.cyclic:
            lines.append(f"group: Z/{G.order}, generator {list(G.generator_vector)}")
        else:
            lines.append("group: " + " + ".join(f"Z/{d}" for d in G.invariant_factors)
                         + " (not cyclic)")
        if self.table is not None:
            shown = ", ".join(str(v) for v in self.table.values[:8])
            more = " ..." if self.table.p > 8 else ""
            lines.append(f"M_Q values: [{shown}{more}]  (certified at B = {self.table.certified_radius})")
        t = self.theorem
        line = f"d-invariant obstruction: {t.verdict}"
        if t.reason:
            line += f" ({t.reason})"
        if t.witness:
            line += f", witness eps = {t.witness[0]:+d}, a = {t.witness[1]}"
        lines.append(line)
        lk = self.lickorish
        line = f"linking-form obstruction: {lk.verdict}"
        if lk.lambda_value is not None:
            line += f", lambda(g0, g0) = {lk.lambda_value}"
        if lk.solution_x is not None:
            line += f", x = {lk.solution_x} gives {lk.achieved}"
        lines.append(line)
        if b.exact is not None:
            lines.append(f"u2 = {b.exact}")
        elif b.upper is not None:
            lines.append(f"{b.lower} <= u2 <= {b.upper}")
        else:
            lines.append(f"u2 >= {b.lower}")
        return "\n".join(lines)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def analyze(g: GoeritzResult, gamma: Optional[int] = None, gamma_star: Optional[int] = None,
            known_band_count: Optional[int] = None, max_bound: Optional[int] = None,
            oracle: bool = False, backend: Optional[str] = None) -> ObstructionReport:
    """Full pipeline for one Goeritz matrix.

    With ``oracle=True`` the table is re-derived by brute force over the
    certified box and any disagreement raises :class:`OracleMismatch`.
    """
    G = group_of(g.Q)
    table = None
    if G.cyclic:
        table = mq_table(g.Q, G, max_bound=max_bound, backend=backend)
        if oracle:
            check_against_oracle(g.Q, G, table)
        thm = theorem_check(table)
    else:
        thm = noncyclic_theorem_report()
    lick = lickorish_check(g, G)
    bounds = u2_bounds(thm, lick, G.order, gamma, gamma_star, known_band_count)
    return ObstructionReport(g, G, table, thm, lick, bounds)


def check_against_oracle(Q, G: FiniteAbelianGroup, table: MQTable) -> None:
    bf = mq_bruteforce(Q, G, certified_box_radius(Q, table))
    for i in range(table.p):
        if i not in bf or bf[i][0] != table.values[i]:
            got = bf[i][0] if i in bf else None
            raise OracleMismatch(f"class {i}: table {table.values[i]}, brute force {got}")
