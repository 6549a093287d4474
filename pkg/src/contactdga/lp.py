"""Exact rational linear programming and diagram feasibility questions.

``solve_lp`` maximizes ``c.x`` subject to ``A x <= b`` and ``x >= 0`` with a
two-phase tableau simplex over ``Fraction``.  Bland's rule picks both the
entering and leaving variables so the method terminates.

Strict homogeneous inequalities (heights and areas positive) are encoded
as ``>= 1``; a cone is nonempty iff that closed system is feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .diagram import Diagram, DiagramError


class LPError(ValueError):
    pass


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None
    ray: Optional[List[Fraction]] = None


def _pivot(T, basis, r, c):
    piv = T[r][c]
    row = [v / piv for v in T[r]]
    T[r] = row
    for i, other in enumerate(T):
        if i != r and other[c] != 0:
            f = other[c]
            T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _simplex(T, basis, obj, allowed):
    """Maximize obj over the tableau; obj is a row of costs per column.

    Returns (status, entering column for an unbounded ray or None).
    """
    ncols = len(T[0]) - 1
    while True:
        # reduced costs: obj_j - sum_i obj_basis[i] * T[i][j]
        enter = None
        for j in range(ncols):
            if j not in allowed or j in basis:
                continue
            rc = obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(len(T)))
            if rc > 0:
                enter = j
                break
        if enter is None:
            return "optimal", None
        best = None
        for i in range(len(T)):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded", enter
        _pivot(T, basis, best[1], enter)


def solve_lp(A, b, c) -> LPResult:
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    m = len(A)
    n = len(c)
    if len(b) != m or any(len(row) != n for row in A):
        raise LPError("dimension mismatch")
    # columns: x (n), slack (m), artificial (k)
    rows, basis, arts = [], [], []
    for i in range(m):
        row = A[i] + [Fraction(int(j == i)) for j in range(m)]
        rhs = b[i]
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
            arts.append(i)
        rows.append((row, rhs))
    k = len(arts)
    T = []
    for i, (row, rhs) in enumerate(rows):
        art = [Fraction(0)] * k
        if i in arts:
            art[arts.index(i)] = Fraction(1)
            basis.append(n + m + arts.index(i))
        else:
            basis.append(n + i)
        T.append(row + art + [rhs])
    total = n + m + k
    if k:
        obj1 = [Fraction(0)] * (n + m) + [Fraction(-1)] * k
        _simplex(T, basis, obj1, set(range(total)))
        val = sum(obj1[basis[i]] * T[i][-1] for i in range(m))
        if val < 0:
            return LPResult("infeasible")
        # drive artificials out of the basis
        for i in range(m):
            if basis[i] >= n + m:
                for j in range(n + m):
                    if T[i][j] != 0:
                        _pivot(T, basis, i, j)
                        break
        keep = [i for i in range(len(T)) if basis[i] < n + m]
        T = [T[i] for i in keep]
        basis = [basis[i] for i in keep]
    obj2 = c + [Fraction(0)] * (m + k)
    status, enter = _simplex(T, basis, obj2, set(range(n + m)))
    x = [Fraction(0)] * (n + m)
    for i, j in enumerate(basis):
        if j < n + m:
            x[j] = T[i][-1]
    if status == "unbounded":
        ray = [Fraction(0)] * (n + m)
        ray[enter] = Fraction(1)
        for i, j in enumerate(basis):
            if j < n + m:
                ray[j] = -T[i][enter]
        return LPResult("unbounded", x=x[:n], ray=ray[:n])
    value = sum(ci * xi for ci, xi in zip(c, x[:n]))
    return LPResult("optimal", x=x[:n], value=value)


# ---------------------------------------------------------------------------

@dataclass
class ConeSystem:
    """Open cone {h : h > 0, E h > 0, f(h) > 0 for f in extra_strict}."""

    E: List[List[int]]
    n: int
    extra_strict: List[List[Fraction]] = field(default_factory=list)
    extra_nonstrict: List[List[Fraction]] = field(default_factory=list)

    def strict_rows(self):
        rows = [[Fraction(int(i == j)) for j in range(self.n)] for i in range(self.n)]
        rows += [[Fraction(v) for v in r] for r in self.E]
        rows += [[Fraction(v) for v in r] for r in self.extra_strict]
        return rows

    def solve(self) -> Optional[List[Fraction]]:
        strict = self.strict_rows()
        for r in strict + self.extra_nonstrict:
            if len(r) != self.n:
                raise LPError("functional has wrong length")
        A = [[-v for v in r] for r in strict] + [[-Fraction(v) for v in r] for r in self.extra_nonstrict]
        b = [Fraction(-1)] * len(strict) + [Fraction(0)] * len(self.extra_nonstrict)
        c = [Fraction(-1)] * self.n
        res = solve_lp(A, b, c)
        if res.status != "optimal":
            return None
        return res.x

    def satisfied_by(self, h) -> bool:
        if any(sum(Fraction(a) * x for a, x in zip(r, h)) <= 0 for r in self.strict_rows()):
            return False
        return all(sum(Fraction(a) * x for a, x in zip(r, h)) >= 0 for r in self.extra_nonstrict)


def cone_system(d: Diagram, extra_strict=()) -> ConeSystem:
    return ConeSystem([list(r.row) for r in d.regions], d.n, [list(f) for f in extra_strict])


def cone_feasible(d: Diagram) -> Optional[List[Fraction]]:
    return cone_system(d).solve()


@dataclass
class MoveSpec:
    """Data describing one Reidemeister move on a diagram.

    kind:   "II", "IIinv", "IIIa" or "IIIb".
    region: the pinched region (II), the bigon (IIinv) or the triangle
            (III), given as a region id or as the list of its corner crossings.
    path:   for II, the ordered corners [crossing, quadrant] met along the
            side of the region that the finger follows.
    right_region: for II, the region on the far side of that path, if known.
    vertex: for IIIb, the triangle corner whose opposite region is compared.
    """

    kind: str
    region: object = None
    path: List = field(default_factory=list)
    right_region: object = None
    vertex: Optional[str] = None

    @classmethod
    def from_json(cls, data):
        return cls(data["kind"], data.get("region"), data.get("path", []),
                   data.get("right_region"), data.get("vertex"))

    def to_json(self):
        out = {"kind": self.kind, "region": self.region}
        if self.path:
            out["path"] = self.path
        if self.right_region is not None:
            out["right_region"] = self.right_region
        if self.vertex is not None:
            out["vertex"] = self.vertex
        return out


def _resolve_region(d: Diagram, ref):
    if ref is None:
        raise LPError("move is missing a region reference")
    if isinstance(ref, str):
        return d.region(ref)
    return d.find_region(list(ref))


def _opposite_region(d: Diagram, region, cid):
    ks = [k for c, k in region.corners if c == cid]
    if len(ks) != 1:
        raise LPError(f"region does not have a single corner at {cid}")
    return d.region_at(cid, (ks[0] + 2) % 4)


def _difference(d: Diagram, plus, minus):
    row = [0] * d.n
    for r in plus:
        row = [a + b for a, b in zip(row, r.row)]
    for r in minus:
        row = [a - b for a, b in zip(row, r.row)]
    return row


def move_inequalities(d: Diagram, m: MoveSpec):
    """Strict homogeneous inequalities for the move, or None when the move
    meets no obstruction (the relevant region is unbounded)."""
    try:
        if m.kind == "II":
            if m.right_region is not None and _resolve_region(d, m.right_region).id == "outer":
                return None
            if not m.path:
                raise LPError("move II needs a path")
            row = [0] * d.n
            for cid, k in m.path:
                if cid not in d.crossings:
                    raise LPError(f"unknown crossing {cid}")
                row[d.col[cid]] += d.crossings[cid].reeb(int(k))
            return [row]
        region = _resolve_region(d, m.region)
        if m.kind == "IIinv":
            if len(region.corners) != 2:
                raise LPError("IIinv region must be a bigon")
            others = [_opposite_region(d, region, c) for c, _ in region.corners]
            if any(not r.bounded for r in others):
                return None
            return [_difference(d, others, [region])]
        if m.kind in ("IIIa", "IIIb"):
            if len(region.corners) != 3:
                raise LPError("III region must be a triangle")
            if m.kind == "IIIb":
                if m.vertex is None:
                    raise LPError("IIIb needs the vertex a")
                verts = [m.vertex]
            else:
                verts = [c for c, _ in region.corners]
            rows = []
            for v in verts:
                other = _opposite_region(d, region, v)
                if other.bounded:
                    rows.append(_difference(d, [other], [region]))
            return rows or None
    except DiagramError as exc:
        raise LPError(str(exc)) from exc
    raise LPError(f"unknown move kind {m.kind!r}")


def move_feasible(d: Diagram, m: MoveSpec):
    """(feasible, witness).  Witness is None when there is no obstruction."""
    rows = move_inequalities(d, m)
    if rows is None:
        return True, None
    h = cone_system(d, rows).solve()
    return h is not None, h


def witness_json(h):
    return None if h is None else [str(x) for x in h]
