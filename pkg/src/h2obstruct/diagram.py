"""Knot diagrams to Goeritz matrices.

PD codes list each crossing as ``X(a,b,c,d)``: the four edge labels met
counterclockwise, starting at the incoming under-strand.  Slot ``j`` of a
crossing is the ``j``-th entry; corner ``j`` is the region between slots
``j`` and ``j + 1``.  Slots 0 and 2 are the under-strand, 1 and 3 the over.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (EvenDeterminant, Indefinite, InconsistentDiagram, InputError,
                     LabelError, NoDefiniteColoring, NotAKnot, NotAlternating,
                     NotReduced, OutOfRange, PDSyntaxError)
from .exactmat import IntSymMatrix, determinant, is_positive_definite

_TERM = re.compile(r"X\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_WS = re.compile(r"\s*")


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[tuple[int, int, int, int], ...]

    @property
    def n(self) -> int:
        return len(self.crossings)

    def __str__(self):
        return " ".join("X(%d,%d,%d,%d)" % c for c in self.crossings)


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def parse_pd(text: str) -> PDCode:
    pos = _WS.match(text, 0).end()
    crossings = []
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None:
            raise PDSyntaxError("expected a term X(a,b,c,d)", _byte_offset(text, pos))
        crossings.append(tuple(int(g) for g in m.groups()))
        end = m.end()
        pos = _WS.match(text, end).end()
        if pos == end and pos < len(text):
            raise PDSyntaxError("terms must be separated by whitespace", _byte_offset(text, pos))
    if not crossings:
        raise PDSyntaxError("no crossings", _byte_offset(text, pos))
    return make_pd(crossings)


def make_pd(crossings: Sequence[Sequence[int]]) -> PDCode:
    """Validate raw quadruples and wrap them."""
    crossings = tuple(tuple(int(x) for x in c) for c in crossings)
    if not crossings:
        raise LabelError("a PD code needs at least one crossing")
    for c in crossings:
        if len(c) != 4:
            raise LabelError(f"crossing {c} does not have four labels")
    n = len(crossings)
    counts: dict[int, int] = {}
    for c in crossings:
        for label in c:
            counts[label] = counts.get(label, 0) + 1
    for label in sorted(counts):
        if not 1 <= label <= 2 * n:
            raise LabelError(f"label {label} outside 1..{2 * n}")
        if counts[label] != 2:
            raise LabelError(f"label {label} appears {counts[label]} times, expected 2")
    if len(counts) != 2 * n:
        missing = sorted(set(range(1, 2 * n + 1)) - set(counts))
        raise LabelError(f"labels {missing} never appear")
    return PDCode(crossings)


def _edge_involution(pd: PDCode) -> dict[tuple[int, int], tuple[int, int]]:
    where: dict[int, list[tuple[int, int]]] = {}
    for c, quad in enumerate(pd.crossings):
        for j, label in enumerate(quad):
            where.setdefault(label, []).append((c, j))
    alpha = {}
    for a, b in where.values():
        alpha[a] = b
        alpha[b] = a
    return alpha


def _check_connected(pd: PDCode, alpha) -> None:
    parent = list(range(pd.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (c, _), (d, _) in alpha.items():
        parent[find(c)] = find(d)
    if len({find(c) for c in range(pd.n)}) != 1:
        raise InconsistentDiagram("diagram is disconnected")


@dataclass(frozen=True)
class FaceSet:
    """Faces as cycles of corners ``(crossing, corner)``."""

    faces: tuple[tuple[tuple[int, int], ...], ...]
    # adjacency[c][j] is the face holding corner j of crossing c
    adjacency: tuple[tuple[int, int, int, int], ...]

    def __len__(self):
        return len(self.faces)


def faces(pd: PDCode) -> FaceSet:
    """Trace faces as orbits of ``rotate . follow_edge`` on crossing slots."""
    alpha = _edge_involution(pd)
    _check_connected(pd, alpha)
    seen = set()
    cycles = []
    adjacency = [[-1] * 4 for _ in range(pd.n)]
    for c in range(pd.n):
        for j in range(4):
            if (c, j) in seen:
                continue
            cycle = []
            s = (c, j)
            while s not in seen:
                seen.add(s)
                corner = alpha[s]
                cycle.append(corner)
                s = (corner[0], (corner[1] + 1) % 4)
            if s != (c, j):
                raise InconsistentDiagram("face traversal does not close up")
            for cc, cj in cycle:
                adjacency[cc][cj] = len(cycles)
            cycles.append(tuple(cycle))
    if len(cycles) != pd.n + 2:
        raise InconsistentDiagram(
            f"{len(cycles)} faces for {pd.n} crossings; a planar diagram has {pd.n + 2}")
    return FaceSet(tuple(cycles), tuple(tuple(a) for a in adjacency))


def is_alternating(pd: PDCode) -> bool:
    """Every edge runs from an under-slot (0, 2) to an over-slot (1, 3)."""
    alpha = _edge_involution(pd)
    return all((a[1] % 2) != (b[1] % 2) for a, b in alpha.items())


def is_reduced(pd: PDCode, f: FaceSet) -> bool:
    return all(len(set(adj)) == 4 for adj in f.adjacency)


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    black: int = 0
    deleted_index: int = 0

    @property
    def black_faces(self) -> tuple[int, ...]:
        return tuple(i for i, col in enumerate(self.colors) if col == self.black)


def checkerboard(f: FaceSet) -> tuple[int, ...]:
    """Proper 2-coloring of faces; face 0 gets color 0."""
    nf = len(f.faces)
    nbrs: list[set[int]] = [set() for _ in range(nf)]
    for adj in f.adjacency:
        for j in range(4):
            a, b = adj[j], adj[(j + 1) % 4]
            nbrs[a].add(b)
            nbrs[b].add(a)
    colors = [-1] * nf
    colors[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for v in nbrs[u]:
            if colors[v] == -1:
                colors[v] = 1 - colors[u]
                stack.append(v)
            elif colors[v] == colors[u]:
                raise InconsistentDiagram("faces admit no checkerboard coloring")
    return tuple(colors)


@dataclass(frozen=True)
class GoeritzResult:
    Q: IntSymMatrix
    determinant: int
    mirrored: bool
    provenance: tuple
    black_face_map: Optional[tuple[int, ...]] = field(default=None, compare=False)

    @property
    def k(self) -> int:
        return self.Q.k

    def describe(self) -> dict:
        kind = self.provenance[0]
        if kind == "pretzel":
            return {"pretzel": list(self.provenance[1])}
        if kind == "pd-code":
            return {"pd": self.provenance[1]}
        if kind == "unknot":
            return {"unknot": True}
        return {"matrix": self.Q.tolist() if not self.mirrored else (-self.Q).tolist()}


def crossing_type(adj: Sequence[int], colors: Sequence[int], black: int) -> int:
    """+1 when the black corners are 0 and 2, -1 when they are 1 and 3.

    Corners 0 and 2 are swept turning counterclockwise from the
    under-strand to the over-strand.
    """
    return 1 if colors[adj[0]] == black else -1


def goeritz_candidates(pd: PDCode, f: FaceSet, colors: Sequence[int],
                       f0_choice: Optional[int] = None, classes=(0, 1)):
    """Yield ``(black, sign, matrix, face_map)`` for each requested color class.

    ``sign`` is the common crossing type of the class, ``None`` when mixed
    (possible only for non-alternating input).
    """
    for black in classes:
        blacks = [i for i, col in enumerate(colors) if col == black]
        types = {crossing_type(adj, colors, black) for adj in f.adjacency}
        sign = types.pop() if len(types) == 1 else None
        pos = {face: r for r, face in enumerate(blacks)}
        m = len(blacks)
        full = [[0] * m for _ in range(m)]
        for adj in f.adjacency:
            t = crossing_type(adj, colors, black)
            j = 0 if t == 1 else 1
            a, b = pos[adj[j]], pos[adj[j + 2]]
            if a == b:
                continue
            full[a][b] -= t
            full[b][a] -= t
            full[a][a] += t
            full[b][b] += t
        d = 0 if f0_choice is None else f0_choice
        if not 0 <= d < m:
            raise OutOfRange(f"f0 index {d} outside the {m} black faces")
        keep = [r for r in range(m) if r != d]
        Q = [[full[r][s] for s in keep] for r in keep]
        yield black, sign, Q, tuple(blacks[r] for r in keep)


def goeritz_from_pd(pd: PDCode, f0_choice: Optional[int] = None) -> GoeritzResult:
    """Positive-definite Goeritz matrix of a reduced alternating diagram.

    Of the four (color class, global sign) candidates the unmirrored
    positive-definite one is returned; ``f0_choice`` indexes the deleted
    face within that color class.
    """
    if not is_alternating(pd):
        raise NotAlternating("diagram is not alternating")
    f = faces(pd)
    if not is_reduced(pd, f):
        raise NotReduced("diagram has a nugatory crossing")
    colors = checkerboard(f)
    options = []
    for black, sign, Q, face_map in goeritz_candidates(pd, f, colors, f0_choice=None):
        if sign is None:
            continue
        for s, mirrored in ((1, False), (-1, True)):
            cand = IntSymMatrix([[s * x for x in row] for row in Q])
            if is_positive_definite(cand):
                options.append((mirrored, black))
    if not options:
        raise NoDefiniteColoring("no color class yields a definite Goeritz matrix")
    mirrored, black = min(options)
    _, _, Q, face_map = next(goeritz_candidates(pd, f, colors, f0_choice, classes=(black,)))
    Q = IntSymMatrix([[(-x if mirrored else x) for x in row] for row in Q])
    if not is_positive_definite(Q):
        raise NoDefiniteColoring("chosen color class is not definite for this f0")
    det = determinant(Q)
    if det % 2 == 0:
        raise EvenDeterminant(f"determinant {det} is even")
    return GoeritzResult(Q, det, mirrored, ("pd-code", str(pd)), face_map)


def goeritz_from_pretzel(p: int, q: int, r: int) -> GoeritzResult:
    params = (p, q, r)
    if any(not isinstance(x, int) or x <= 0 for x in params):
        raise OutOfRange(f"pretzel parameters must be positive integers, got {params}")
    if sum(x % 2 == 0 for x in params) >= 2:
        raise NotAKnot(f"P{params} has two or more even parameters: it is a link")
    Q = IntSymMatrix([[p + q, -q], [-q, q + r]])
    if not is_positive_definite(Q):
        raise Indefinite("pretzel Goeritz matrix is not positive definite")
    det = determinant(Q)
    if det % 2 == 0:
        raise EvenDeterminant(f"determinant {det} is even")
    return GoeritzResult(Q, det, False, ("pretzel", params))


def goeritz_from_matrix(raw) -> GoeritzResult:
    M = raw if isinstance(raw, IntSymMatrix) else IntSymMatrix(raw)
    if is_positive_definite(M):
        Q, mirrored = M, False
    elif is_positive_definite(-M):
        Q, mirrored = -M, True
    else:
        raise Indefinite("neither the matrix nor its negative is positive definite")
    det = determinant(Q)
    if det % 2 == 0:
        raise EvenDeterminant(f"determinant {det} is even; knot determinants are odd")
    kind = ("unknot",) if Q.k == 0 else ("raw-matrix",)
    return GoeritzResult(Q, det, mirrored, kind)


def goeritz_from_json(obj: dict) -> GoeritzResult:
    """Build from ``{"pd": ...}``, ``{"pretzel": [p,q,r]}``, ``{"matrix": ...}``
    or ``{"unknot": true}``, with optional ``"f0"``."""
    if not isinstance(obj, dict):
        raise InputError("input must be a JSON object")
    keys = [k for k in ("pd", "pretzel", "matrix", "unknot") if k in obj]
    extra = set(obj) - {"pd", "pretzel", "matrix", "unknot", "f0"}
    if len(keys) != 1 or extra:
        raise InputError("input needs exactly one of pd, pretzel, matrix, unknot")
    key = keys[0]
    f0 = obj.get("f0")
    if f0 is not None and key != "pd":
        raise InputError("f0 applies only to pd input")
    if key == "pd":
        return goeritz_from_pd(parse_pd(obj["pd"]), f0)
    if key == "pretzel":
        vals = obj["pretzel"]
        if not isinstance(vals, list) or len(vals) != 3:
            raise InputError("pretzel needs three integers")
        return goeritz_from_pretzel(*vals)
    if key == "matrix":
        try:
            M = IntSymMatrix(obj["matrix"])
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad matrix: {exc}") from None
        return goeritz_from_matrix(M)
    if obj["unknot"] is not True:
        raise InputError('unknot must be true')
    return goeritz_from_matrix(IntSymMatrix([]))


# ends of a drawn crossing, counterclockwise
NE, NW, SW, SE = range(4)


def pretzel_pd(*params: int, mirror: bool = False) -> PDCode:
    """PD code of the standard pretzel diagram with the given column counts.

    Each column is a vertical twist; columns are joined side by side at
    top and bottom and closed by two outer arcs.  The over-strand runs
    NE-SW in every crossing (NW-SE with ``mirror``), which makes the
    diagram alternating.
    """
    if len(params) < 1 or any(x <= 0 for x in params):
        raise OutOfRange("pretzel columns need positive crossing counts")
    m = len(params)
    ids = {}
    for col, cnt in enumerate(params):
        for t in range(cnt):
            ids[col, t] = len(ids)
    link = {}

    def join(a, b):
        link[a] = b
        link[b] = a

    for col, cnt in enumerate(params):
        for t in range(cnt - 1):
            join((ids[col, t], SW), (ids[col, t + 1], NW))
            join((ids[col, t], SE), (ids[col, t + 1], NE))
    for col in range(m):
        nxt = (col + 1) % m
        join((ids[col, 0], NE), (ids[nxt, 0], NW))
        join((ids[col, params[col] - 1], SE), (ids[nxt, params[nxt] - 1], SW))

    through = {NE: SW, SW: NE, NW: SE, SE: NW}
    under = {NE, SW} if mirror else {NW, SE}
    n = len(ids)
    labels: dict[tuple[int, int], int] = {}
    entered: dict[int, int] = {}
    pos = (0, NW)
    for step in range(2 * n):
        c, end = pos
        if (c, end) in labels:
            raise NotAKnot("pretzel parameters give a link")
        labels[c, end] = step if step else 2 * n
        if end in under:
            entered[c] = end
        out = (c, through[end])
        labels[out] = step + 1
        pos = link[out]
    if pos != (0, NW) or len(labels) != 4 * n:
        raise NotAKnot("pretzel parameters give a link")
    crossings = []
    for c in range(n):
        start = entered[c]
        crossings.append(tuple(labels[c, (start + j) % 4] for j in range(4)))
    return make_pd(crossings)
