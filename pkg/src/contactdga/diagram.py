"""Combinatorial Lagrangian diagrams.

A diagram is a 4-valent planar map.  Every crossing has four half-edge
slots listed counterclockwise; quadrant ``k`` of a crossing is the corner
between slot ``k`` and slot ``k+1``.  Arcs join half-edges and are listed
in the direction of the knot orientation.  Faces are found by walking
darts: leaving a crossing through slot ``k`` the face on the left is the
one containing quadrant ``k``, and arriving through slot ``s`` the walk
continues out of slot ``s-1``.

Reeb signs follow one fixed rule: quadrant ``k`` is positive exactly when
slot ``k`` belongs to the over strand.  This is the convention that turns
the standard trefoil into the expected area functionals, and the unit
tests pin it down.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Report


class DiagramError(ValueError):
    pass


Dart = Tuple[str, int]


@dataclass
class Crossing:
    id: str
    slots: List[str]
    over: Tuple[int, int]
    index: Optional[int] = None
    height: Optional[Fraction] = None

    @property
    def under(self):
        return tuple(k for k in range(4) if k not in self.over)

    def reeb(self, k: int) -> int:
        return 1 if k % 4 in self.over else -1

    @property
    def reeb_signs(self):
        return [self.reeb(k) for k in range(4)]


@dataclass
class Region:
    id: str
    bounded: bool
    corners: List[Dart]
    row: List[int] = field(default_factory=list)

    def crossings(self):
        return sorted(c for c, _ in self.corners)


def _natural_key(s):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s)]


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise DiagramError("heights must be exact rationals, not floats")
    return Fraction(x)


class Diagram:
    """Immutable combinatorial diagram built from a DiagramSpec mapping."""

    def __init__(self, spec: dict):
        self.spec = spec
        self.crossings: Dict[str, Crossing] = {}
        self.order: List[str] = []
        owner: Dict[str, Dart] = {}
        for c in spec.get("crossings", []):
            cid = str(c["id"])
            if cid in self.crossings:
                raise DiagramError(f"duplicate crossing id {cid}")
            slots = [str(h) for h in c["slots"]]
            if len(slots) != 4:
                raise DiagramError(f"crossing {cid} must have four slots")
            over = tuple(sorted(int(k) % 4 for k in c["over"]))
            if len(over) != 2 or over[1] - over[0] != 2:
                raise DiagramError(f"over strand of {cid} must be a pair of opposite slots")
            for k, h in enumerate(slots):
                if h in owner:
                    raise DiagramError(f"half-edge {h} used twice")
                owner[h] = (cid, k)
            self.crossings[cid] = Crossing(cid, slots, over)
            self.order.append(cid)
        self.owner = owner
        self.col = {cid: i for i, cid in enumerate(self.order)}

        self.partner: Dict[Dart, Dart] = {}
        self.outgoing: Dict[Dart, bool] = {}
        for arc in spec.get("arcs", []):
            h1, h2 = (str(x) for x in arc)
            if h1 not in owner or h2 not in owner:
                raise DiagramError(f"arc {arc} references an unknown half-edge")
            d1, d2 = owner[h1], owner[h2]
            if d1 in self.partner or d2 in self.partner or d1 == d2:
                raise DiagramError(f"half-edge reused in arc {arc}")
            self.partner[d1] = d2
            self.partner[d2] = d1
            self.outgoing[d1] = True
            self.outgoing[d2] = False
        dangling = [h for h, d in owner.items() if d not in self.partner]
        if dangling:
            raise DiagramError(f"dangling half-edges {sorted(dangling)}")
        # a strand enters through one slot and leaves through the opposite one
        for cid, c in self.crossings.items():
            for k in (0, 1):
                if self.outgoing[(cid, k)] == self.outgoing[(cid, k + 2)]:
                    raise DiagramError(f"strand through slots {k},{k + 2} of {cid} is not consistently oriented")

        grads = spec.get("gradings") or {}
        for cid, v in grads.items():
            if cid not in self.crossings:
                raise DiagramError(f"grading for unknown crossing {cid}")
            self.crossings[cid].index = int(v)
        heights = spec.get("heights") or {}
        for cid, v in heights.items():
            if cid not in self.crossings:
                raise DiagramError(f"height for unknown crossing {cid}")
            h = _frac(v)
            if h <= 0:
                raise DiagramError("heights must be positive")
            self.crossings[cid].height = h
        self.maslov = int(spec.get("maslov", 0))
        self.rotation = spec.get("rotation")
        self.n = len(self.order)
        self._build_faces()

    # faces
    def next_dart(self, dart: Dart) -> Dart:
        c2, k2 = self.partner[dart]
        return (c2, (k2 - 1) % 4)

    def _build_faces(self):
        spec = self.spec
        if self.n == 0:
            orient = spec.get("orientation", "ccw")
            if orient not in ("ccw", "cw"):
                raise DiagramError("a crossingless diagram needs orientation 'ccw' or 'cw'")
            self.regions = [Region("U1", True, [], [])]
            self.outer = Region("outer", False, [], [])
            self._faces = []
            self._windings = [1 if orient == "ccw" else -1]
            return
        seen: Dict[Dart, int] = {}
        faces: List[List[Dart]] = []
        for cid in self.order:
            for k in range(4):
                d = (cid, k)
                if d in seen:
                    continue
                cyc = []
                while d not in seen:
                    seen[d] = len(faces)
                    cyc.append(d)
                    d = self.next_dart(d)
                if d != cyc[0]:
                    raise DiagramError("face traversal did not close up")
                faces.append(cyc)
        self._faces = faces
        self._face_of = seen
        if not self._connected():
            raise DiagramError("diagram is not connected")
        if len(faces) != self.n + 2:
            raise DiagramError(f"rotation system is not planar: {len(faces)} faces for {self.n} crossings")

        outer = spec.get("outer")
        if outer is None:
            raise DiagramError("spec must name a corner of the unbounded region ('outer')")
        outer_face = self._face_at(outer)
        labels = spec.get("region_labels") or {}
        named: Dict[int, str] = {}
        for name, corner in labels.items():
            f = self._face_at(corner)
            if f == outer_face:
                raise DiagramError(f"label {name} points at the unbounded region")
            if f in named:
                raise DiagramError(f"two labels for one region ({named[f]}, {name})")
            named[f] = name
        rest = [f for f in range(len(faces)) if f != outer_face and f not in named]
        rest.sort(key=lambda f: sorted((self.col[c], k) for c, k in faces[f]))
        used = set(named.values())
        counter = 1
        for f in rest:
            while f"U{counter}" in used:
                counter += 1
            named[f] = f"U{counter}"
            used.add(named[f])
        bounded = sorted(named, key=lambda f: _natural_key(named[f]))
        self.regions = [self._region(named[f], True, faces[f]) for f in bounded]
        self.outer = self._region("outer", False, faces[outer_face])
        self._region_face = {r.id: f for r, f in zip(self.regions, bounded)}
        self._region_face["outer"] = outer_face
        self._face_name = {f: r for r, f in self._region_face.items()}
        self._windings = None

    def _connected(self):
        if not self.order:
            return True
        adj = {cid: set() for cid in self.order}
        for (c1, _), (c2, _) in self.partner.items():
            adj[c1].add(c2)
        stack, seen = [self.order[0]], {self.order[0]}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.order)

    def _face_at(self, corner):
        cid, k = str(corner[0]), int(corner[1]) % 4
        if cid not in self.crossings:
            raise DiagramError(f"unknown crossing {cid} in corner reference")
        return self._face_of[(cid, k)]

    def _region(self, name, bounded, darts):
        row = [0] * self.n
        for cid, k in darts:
            row[self.col[cid]] += self.crossings[cid].reeb(k)
        return Region(name, bounded, sorted(darts, key=lambda d: (self.col[d[0]], d[1])), row)

    # lookups
    def region(self, rid: str) -> Region:
        if rid == "outer":
            return self.outer
        for r in self.regions:
            if r.id == rid:
                return r
        raise DiagramError(f"unknown region {rid}")

    def region_at(self, cid: str, k: int) -> Region:
        """Region containing quadrant ``k`` of crossing ``cid``."""
        return self.region(self._face_name[self._face_at((cid, k))])

    def find_region(self, crossings: Sequence[str]) -> Region:
        """The unique bounded or unbounded region whose corners sit at exactly these crossings."""
        want = sorted(crossings)
        hits = [r for r in self.regions + [self.outer] if r.crossings() == want]
        if len(hits) != 1:
            raise DiagramError(f"{len(hits)} regions have corners {want}")
        return hits[0]

    def face_darts(self, rid: str) -> List[Dart]:
        return list(self._faces[self._region_face[rid]])

    def positive_corners(self, r: Region) -> int:
        return sum(1 for c, k in r.corners if self.crossings[c].reeb(k) > 0)

    def gradings(self):
        return {c: self.crossings[c].index for c in self.order}

    def orientation_signs(self, cid: str) -> List[int]:
        """All +1 at odd crossings; at even ones the two quadrants flanking
        the outgoing half of the under strand get -1."""
        c = self.crossings[cid]
        if c.index is None:
            raise DiagramError(f"crossing {cid} has no grading")
        if c.index % 2:
            return [1, 1, 1, 1]
        out = next(k for k in c.under if self.outgoing[(cid, k)])
        signs = [1, 1, 1, 1]
        signs[out] = signs[(out - 1) % 4] = -1
        return signs

    def to_spec(self) -> dict:
        return dict(self.spec)

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return _normal_spec(self.spec) == _normal_spec(other.spec)

    def __repr__(self):
        return f"Diagram({self.n} crossings, {len(self.regions)} bounded regions)"


def _normal_spec(spec):
    out = dict(spec)
    for key in ("heights",):
        if key in out and out[key] is not None:
            out[key] = {k: str(_frac(v)) for k, v in out[key].items()}
    return out


def build_diagram(spec: dict) -> Diagram:
    return Diagram(spec)


def kink_spec(feasible: bool = True) -> dict:
    """One-crossing figure-eight curve; only one chirality has a Legendrian
    lift (both loop regions get row [+1])."""
    return {"crossings": [{"id": "k", "slots": ["k.0", "k.1", "k.2", "k.3"],
                           "over": [0, 2] if feasible else [1, 3]}],
            "arcs": [["k.0", "k.1"], ["k.3", "k.2"]], "orientation": "arcs", "outer": ["k", 1]}


def builtin_spec(name: str) -> dict:
    """Bundled diagrams: ``trefoil``, ``kink`` and ``kink-infeasible``."""
    if name == "trefoil":
        import json
        from importlib import resources
        return json.loads(resources.files("contactdga").joinpath("data/trefoil.json").read_text())
    if name in ("kink", "kink-infeasible"):
        return kink_spec(name == "kink")
    raise DiagramError(f"no bundled diagram named {name!r}")


def incidence_matrix(d: Diagram) -> List[List[int]]:
    return [list(r.row) for r in d.regions]


def area_vector(d: Diagram, h) -> List[Fraction]:
    if isinstance(h, dict):
        h = [h[c] for c in d.order]
    h = [_frac(x) for x in h]
    if len(h) != d.n:
        raise DiagramError(f"expected {d.n} heights, got {len(h)}")
    if any(x <= 0 for x in h):
        raise DiagramError("heights must be positive")
    return [sum((e * x for e, x in zip(r.row, h)), Fraction(0)) for r in d.regions]


def thurston_bennequin(d: Diagram) -> int:
    if any(c.index is None for c in d.crossings.values()):
        raise DiagramError("gradings missing")
    even = sum(1 for c in d.crossings.values() if c.index % 2 == 0)
    return even - (d.n - even)


def check_grading(d: Diagram, maslov: Optional[int] = None) -> Report:
    """Corner count congruence: sum_j E_ij |a_j| = 2 - #positive corners."""
    m = d.maslov if maslov is None else maslov
    rep = Report("grading")
    if any(c.index is None for c in d.crossings.values()):
        rep.fail("diagram", "gradings missing")
        return rep
    idx = [d.crossings[c].index for c in d.order]
    for r in d.regions:
        rep.checked += 1
        lhs = sum(e * i for e, i in zip(r.row, idx))
        rhs = 2 - d.positive_corners(r)
        diff = lhs - rhs
        if (diff % m if m else diff) != 0:
            rep.fail(r.id, f"{lhs} vs {rhs}")
    return rep


def region_windings(d: Diagram) -> List[int]:
    if d._windings is not None:
        return list(d._windings)
    w = {d._region_face["outer"]: 0}
    edges = []
    for dart, out in d.outgoing.items():
        if out:
            left = d._face_of[dart]
            right = d._face_of[d.partner[dart]]
            edges.append((left, right))
    changed = True
    while changed:
        changed = False
        for left, right in edges:
            if right in w and left not in w:
                w[left] = w[right] + 1
                changed = True
            elif left in w and right not in w:
                w[right] = w[left] - 1
                changed = True
            elif left in w and right in w and w[left] != w[right] + 1:
                raise DiagramError("inconsistent winding numbers")
    d._windings = [w[d._region_face[r.id]] for r in d.regions]
    return list(d._windings)


def crossing_winding_balance(d: Diagram, cid: str) -> int:
    """Sum of windings over Reeb-positive corners minus over negative ones."""
    wmap = dict(zip((r.id for r in d.regions), region_windings(d)))
    wmap["outer"] = 0
    c = d.crossings[cid]
    return sum(c.reeb(k) * wmap[d.region_at(cid, k).id] for k in range(4))


def isomorphic(d1: Diagram, d2: Diagram, mapping: Optional[Dict[str, str]] = None) -> bool:
    """Labeled planar-map isomorphism respecting over/under, orientation and the outer region."""
    if d1.n != d2.n:
        return False
    if mapping is None:
        mapping = {c: c for c in d1.order}
    if sorted(mapping) != sorted(d1.order) or sorted(mapping.values()) != sorted(d2.order):
        return False
    if d1.n == 0:
        return d1.spec.get("orientation") == d2.spec.get("orientation")
    start = d1.order[0]
    for r0 in range(4):
        rot = {start: r0}
        stack = [start]
        ok = True
        while stack and ok:
            v = stack.pop()
            for k in range(4):
                w, k2 = d1.partner[(v, k)]
                img = d2.partner[(mapping[v], (k + rot[v]) % 4)]
                if img[0] != mapping[w]:
                    ok = False
                    break
                r = (img[1] - k2) % 4
                if w in rot:
                    if rot[w] != r:
                        ok = False
                        break
                else:
                    rot[w] = r
                    stack.append(w)
        if not ok or len(rot) != d1.n:
            continue
        for v in d1.order:
            c1, c2 = d1.crossings[v], d2.crossings[mapping[v]]
            if tuple(sorted((k + rot[v]) % 4 for k in c1.over)) != c2.over:
                ok = False
            for k in range(4):
                if d1.outgoing[(v, k)] != d2.outgoing[(mapping[v], (k + rot[v]) % 4)]:
                    ok = False
        if not ok:
            continue
        oc, ok_ = d1.outer.corners[0]
        if d2._face_of[(mapping[oc], (ok_ + rot[oc]) % 4)] != d2._region_face["outer"]:
            continue
        return True
    return False


# ---------------------------------------------------------------------------
# local surgery producing new specs

def _canonical_parts(d: Diagram):
    """(over, arcs) with arcs as directed dart pairs."""
    over = {c: d.crossings[c].over for c in d.order}
    arcs = [(a, b) for a, out in d.outgoing.items() if out for b in [d.partner[a]]]
    return over, arcs


def _emit(order, over, arcs, outer, gradings, maslov, rotation, heights=None):
    spec = {
        "crossings": [{"id": c, "slots": [f"{c}.{k}" for k in range(4)], "over": list(over[c])}
                      for c in order],
        "arcs": [[f"{a[0]}.{a[1]}", f"{b[0]}.{b[1]}"] for a, b in sorted(arcs, key=lambda e: (order.index(e[0][0]), e[0][1]))],
        "orientation": "arcs",
        "outer": [outer[0], outer[1]],
        "gradings": {c: gradings[c] for c in order if gradings.get(c) is not None},
        "maslov": maslov,
    }
    if rotation is not None:
        spec["rotation"] = rotation
    if heights:
        spec["heights"] = {c: str(v) for c, v in heights.items() if c in order}
    return spec


def _surviving_outer(d: Diagram, touched):
    for c, k in d.outer.corners:
        if c not in touched:
            return (c, k)
    raise DiagramError("cannot locate the unbounded region after surgery")


def finger_move(d: Diagram, pusher: Dart, target: Dart, names: Tuple[str, str],
                pusher_over: bool, gradings: Dict[str, int]) -> dict:
    """Reidemeister II birth.

    ``pusher`` and ``target`` are darts (crossing, slot) that leave a
    crossing with a common face on their left.  The edge of ``pusher`` is
    pushed across that face and through the edge of ``target``, creating
    two crossings named ``names`` (first met by the pusher, second met).
    """
    f1, f2 = d._face_of.get(pusher), d._face_of.get(target)
    if f1 is None or f2 is None or f1 != f2:
        raise DiagramError("finger move needs two darts on the same face")
    x, y = names
    if x in d.crossings or y in d.crossings:
        raise DiagramError("new crossing names already in use")
    over, arcs = _canonical_parts(d)
    u1, v1 = pusher, d.partner[pusher]
    u2, v2 = target, d.partner[target]
    # slots: 0=E 1=N 2=W 3=S in the local picture where the pusher runs up
    new_edges = [(u1, (x, 3)), ((x, 1), (y, 1)), ((y, 3), v1),
                 (u2, (y, 0)), ((y, 2), (x, 0)), ((x, 2), v2)]
    oriented = set(arcs)

    def place(chain, original):
        # chain of dart pairs following traversal u -> v; flip if the arc runs v -> u
        if original in oriented:
            return chain
        return [(b, a) for a, b in reversed(chain)]

    arcs = [a for a in arcs if a not in ((u1, v1), (v1, u1), (u2, v2), (v2, u2))]
    arcs += place(new_edges[:3], (u1, v1))
    arcs += place(new_edges[3:], (u2, v2))
    over = dict(over)
    over[x] = over[y] = (1, 3) if pusher_over else (0, 2)
    order = d.order + [x, y]
    grads = dict(d.gradings())
    grads.update(gradings)
    return _emit(order, over, arcs, _surviving_outer(d, set()), grads, d.maslov, d.rotation)


def _line_geometry(offset):
    # three lines through points at angles 60*i, shifted by a common offset
    lines = []
    for i in range(3):
        th = math.pi * i / 3
        p = (math.cos(th), math.sin(th))
        dvec = (-p[0], -p[1])
        nrm = (-dvec[1], dvec[0])
        start = (p[0] + offset * nrm[0], p[1] + offset * nrm[1])
        lines.append((start, dvec))
    return lines


def _intersect(l1, l2):
    (p, d), (q, e) = l1, l2
    det = d[0] * (-e[1]) - d[1] * (-e[0])
    rx, ry = q[0] - p[0], q[1] - p[1]
    s = (rx * (-e[1]) - ry * (-e[0])) / det
    return s, (p[0] + s * d[0], p[1] + s * d[1])


def _local_triangle(offset):
    """Combinatorics of three lines e_i -> e_{i+3} near a common point.

    Returns, per line, the ordered list of crossings met (as frozensets of
    line pairs), and, per crossing, the ccw list of (line, forward?) slots.
    """
    lines = _line_geometry(offset)
    pts = {}
    order = {i: [] for i in range(3)}
    for i in range(3):
        for j in range(i + 1, 3):
            s, pt = _intersect(lines[i], lines[j])
            t, _ = _intersect(lines[j], lines[i])
            pts[frozenset((i, j))] = pt
            order[i].append((s, frozenset((i, j))))
            order[j].append((t, frozenset((i, j))))
    seq = {i: [c for _, c in sorted(order[i], key=lambda z: z[0])] for i in range(3)}
    rot = {}
    for c, pt in pts.items():
        dirs = []
        for i in c:
            d = lines[i][1]
            dirs.append((math.atan2(d[1], d[0]), (i, True)))
            dirs.append((math.atan2(-d[1], -d[0]), (i, False)))
        dirs.sort()
        rot[c] = [s for _, s in dirs]
    return seq, rot


def triangle_move(d: Diagram, region_id: str) -> dict:
    """Reidemeister III across a triangular region; crossings keep their
    names, strand heights and gradings."""
    darts = d.face_darts(region_id)
    if len(darts) != 3 or len({c for c, _ in darts}) != 3:
        raise DiagramError(f"region {region_id} is not an embedded triangle")
    over, arcs = _canonical_parts(d)
    oriented = set(arcs)
    # externals in ccw order around the triangle
    ext = []  # (dart at triangle vertex, partner dart outside)
    for c, k in darts:
        for s in ((k + 2) % 4, (k + 3) % 4):
            ext.append(((c, s), d.partner[(c, s)]))
    verts = [c for c, _ in darts]
    # line i joins ext[i] and ext[i+3]; the vertex where the line starts
    line_of_vertex_pair = {}
    for i in range(3):
        a_vertex = ext[i][0][0]
        b_vertex = ext[i + 3][0][0]
        line_of_vertex_pair[i] = (a_vertex, b_vertex)
    # crossing named by the pair of lines through it
    name_of = {}
    for c in verts:
        lines_here = frozenset(i for i in range(3) if c in line_of_vertex_pair[i])
        name_of[lines_here] = c
    if len(name_of) != 3:
        raise DiagramError("triangle strands do not form three distinct lines")
    # every slot at a vertex lies on the line of its external end or of its opposite slot
    line_of_slot = {}
    for idx, (dart, _) in enumerate(ext):
        line_of_slot[dart] = idx % 3
        line_of_slot[(dart[0], (dart[1] + 2) % 4)] = idx % 3
    over_line = {c: line_of_slot[(c, over[c][0])] for c in verts}
    for i in range(3):
        if {ext[i][0][0], ext[i + 3][0][0]} != set(line_of_vertex_pair[i]):
            raise DiagramError("triangle externals are not antipodal")
    # choose the flipped configuration: line 0 must now meet line 2 first
    chosen = None
    for off in (0.2, -0.2):
        seq, rot = _local_triangle(off)
        if seq[0][0] == frozenset((0, 2)):
            chosen = (seq, rot)
    if chosen is None or name_of[frozenset((0, 1))] != ext[0][0][0]:
        raise DiagramError("unexpected triangle configuration")
    seq, rot = chosen
    # direction of each line: forward means traversed from ext[i] to ext[i+3]
    forward = {}
    for i in range(3):
        (vc, vs), outside = ext[i]
        forward[i] = (outside, (vc, vs)) in oriented
    new_over = dict(over)
    slot_of = {}
    for pair, slots in rot.items():
        c = name_of[pair]
        for k, (line, fwd_dir) in enumerate(slots):
            slot_of[(pair, line, fwd_dir)] = (c, k)
        ol = over_line[c]
        ks = [k for k, (line, _) in enumerate(slots) if line == ol]
        new_over[c] = tuple(sorted(ks))
    removed = set()
    for c in verts:
        for k in range(4):
            removed.add((c, k))
    arcs = [a for a in arcs if a[0] not in removed and a[1] not in removed]
    # partners of externals may themselves be triangle slots (loops); map them
    ext_index = {e[0]: idx for idx, e in enumerate(ext)}
    new_arcs = []
    for i in range(3):
        chain = []  # traversal e_i -> e_{i+3} as darts
        crossings = seq[i]
        entry = slot_of[(crossings[0], i, False)]
        chain_nodes = [("ext", i), entry]
        for a, b in zip(crossings, crossings[1:]):
            chain_nodes.append(slot_of[(a, i, True)])
            chain_nodes.append(slot_of[(b, i, False)])
        chain_nodes.append(slot_of[(crossings[-1], i, True)])
        chain_nodes.append(("ext", i + 3))
        pieces = []
        for a, b in zip(chain_nodes[0::2], chain_nodes[1::2]):
            pieces.append((a, b))
        for a, b in pieces:
            pa = _resolve_ext(a, ext, ext_index, slot_of, seq)
            pb = _resolve_ext(b, ext, ext_index, slot_of, seq)
            if pa is None or pb is None:
                continue
            new_arcs.append((pa, pb) if forward[i] else (pb, pa))
    seen = set()
    for a in new_arcs:
        key = frozenset(a)
        if key not in seen:
            seen.add(key)
            arcs.append(a)
    return _emit(d.order, new_over, arcs, _surviving_outer(d, set(verts)), d.gradings(),
                 d.maslov, d.rotation)


def _resolve_ext(node, ext, ext_index, slot_of, seq):
    if node[0] != "ext":
        return node
    i = node[1]
    outside = ext[i][1]
    if outside in ext_index:
        # the external edge runs to another external slot of the triangle
        j = ext_index[outside]
        line = j % 3
        crossings = seq[line]
        if j < 3:
            return slot_of[(crossings[0], line, False)]
        return slot_of[(crossings[-1], line, True)]
    return outside


def bigon_removal(d: Diagram, region_id: str) -> dict:
    """Reidemeister II^-1: delete the two corners of a bigon region."""
    darts = d.face_darts(region_id)
    if len(darts) != 2 or darts[0][0] == darts[1][0]:
        raise DiagramError(f"region {region_id} is not a bigon")
    (x, kx), (y, ky) = darts
    over, arcs = _canonical_parts(d)
    oriented = set(arcs)
    # strand A leaves x through kx, strand B arrives at x through kx+1
    new = []
    for sx in (kx, (kx + 1) % 4):
        yc, sy = d.partner[(x, sx)]
        if yc != y:
            raise DiagramError("bigon sides do not join its two corners")
        if (sx in over[x]) != (sy in over[y]):
            raise DiagramError("bigon strands swap over/under; not a II configuration")
        far_x, far_y = (x, (sx + 2) % 4), (y, (sy + 2) % 4)
        out_x, out_y = d.partner[far_x], d.partner[far_y]
        if out_x == far_y:
            raise DiagramError("bigon removal would leave a closed crossingless component")
        new.append((out_x, out_y) if (out_x, far_x) in oriented else (out_y, out_x))
    removed = {(c, k) for c in (x, y) for k in range(4)}
    arcs = [a for a in arcs if a[0] not in removed and a[1] not in removed] + new
    order = [c for c in d.order if c not in (x, y)]
    over = {c: over[c] for c in order}
    grads = {c: d.crossings[c].index for c in order}
    return _emit(order, over, arcs, _surviving_outer(d, {x, y}), grads, d.maslov, d.rotation)


def relabel_spec(spec: dict, mapping: Dict[str, str]) -> dict:
    """Rename crossings (and their canonical half-edge names)."""
    def rn_h(h):
        c, _, k = h.rpartition(".")
        return f"{mapping.get(c, c)}.{k}" if c else h
    out = dict(spec)
    out["crossings"] = [{"id": mapping.get(c["id"], c["id"]), "slots": [rn_h(h) for h in c["slots"]],
                         "over": list(c["over"])} for c in spec["crossings"]]
    out["arcs"] = [[rn_h(a), rn_h(b)] for a, b in spec["arcs"]]
    if "outer" in spec:
        out["outer"] = [mapping.get(spec["outer"][0], spec["outer"][0]), spec["outer"][1]]
    for key in ("gradings", "heights"):
        if spec.get(key):
            out[key] = {mapping.get(c, c): v for c, v in spec[key].items()}
    if spec.get("region_labels"):
        out["region_labels"] = {r: [mapping.get(c, c), k] for r, (c, k) in spec["region_labels"].items()}
    return out
