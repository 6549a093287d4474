"""Augmented permutation graphs and the canonical augmentation of a
positive braid closure.

For a permutation sigma and a non-maximal element p of one of its cycles,
walk forward from p along sigma while the elements stay <= p; the last
element reached is p_plus.  Walking backward the same way gives p_minus.
The chord p_plus -> p_minus (labelled p) together with the edges
s -> sigma(s) form the augmented graph.  The crossings labelled
(p_plus, p_minus, 1) form an augmentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .algebra import Poly, Z2
from .braid import (Braid, _path_dp, _Tables, closure_dga, components, is_admissible,
                    torus_position)


class AugmentationError(RuntimeError):
    pass


@dataclass
class AugGraph:
    sigma: Tuple[int, ...]
    cycles: List[List[int]]
    edges: List[Tuple[int, int]]
    # (label p, p_plus, p_minus, loop_side) ; loop_side only meaningful for loop chords
    chords: List[Tuple[int, int, int, Optional[str]]]

    @property
    def q(self):
        return len(self.sigma)

    def edge_set(self) -> Set[Tuple[int, int]]:
        return set(self.edges) | {(a, b) for _, a, b, _ in self.chords}

    def adjacency(self) -> Dict[int, List[int]]:
        adj = {v: [] for v in range(1, self.q + 1)}
        for a, b in sorted(self.edge_set()):
            adj[a].append(b)
        return adj

    def plus_minus(self, p):
        for lab, a, b, _ in self.chords:
            if lab == p:
                return a, b
        raise AugmentationError(f"{p} is maximal in its cycle")

    def to_json(self):
        return {"sigma": list(self.sigma), "cycles": self.cycles,
                "edges": [list(e) for e in self.edges],
                "chords": [{"label": p, "from": a, "to": b, **({"side": s} if s else {})}
                           for p, a, b, s in self.chords]}


def _inverse(sigma):
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return tuple(inv)


def augmented_graph(sigma: Sequence[int]) -> AugGraph:
    sigma = tuple(sigma)
    inv = _inverse(sigma)
    cycles = components(sigma)
    edges = [(s, sigma[s - 1]) for s in range(1, len(sigma) + 1)]
    chords = []
    for cyc in cycles:
        top = max(cyc)
        for p in sorted(cyc):
            if p == top:
                continue
            plus = p
            while sigma[plus - 1] <= p:
                plus = sigma[plus - 1]
            minus = p
            while inv[minus - 1] <= p:
                minus = inv[minus - 1]
            side = None
            if plus == minus == p:
                # loop edge drawn on the side of p's smaller neighbour
                side = "after" if sigma[p - 1] < inv[p - 1] else "before"
            chords.append((p, plus, minus, side))
    return AugGraph(sigma, cycles, edges, chords)


def loop_of(g: AugGraph, p: int) -> List[int]:
    """The loop at p through vertices smaller than p, as a vertex list p ... p."""
    sigma = g.sigma
    cyc = next(c for c in g.cycles if p in c)
    if p == max(cyc):
        out = [p]
        x = sigma[p - 1]
        while x != p:
            out.append(x)
            x = sigma[x - 1]
        return out + [p]
    plus, minus = g.plus_minus(p)
    out = [p]
    x = p
    while x != plus:
        x = sigma[x - 1]
        out.append(x)
    out.append(minus)
    x = minus
    while x != p:
        x = sigma[x - 1]
        out.append(x)
    return out


def admissible_walks(adj: Dict[int, List[int]], start: int, end: int, bound: int,
                     limit: int = 10 ** 6) -> List[Tuple[int, ...]]:
    """All walks start -> ... -> end whose intermediate vertices form an
    admissible sequence over {1..bound-1} (exhaustive search)."""
    out = []

    def dfs(v, seq):
        if len(out) > limit:
            raise OverflowError("too many walks")
        for w in adj[v]:
            if w == end:
                out.append(tuple(seq))
            if w < bound:
                nxt = seq + [w]
                if is_admissible(nxt):
                    dfs(w, nxt)

    dfs(start, [])
    return out


def reverse_path(g: AugGraph, p: int, r: int) -> Optional[List[int]]:
    """Path p -> r along the loop at r, if every intermediate vertex is < p."""
    if not (p < r and g.sigma[r - 1] == p):
        raise AugmentationError("need p < r and sigma(r) = p")
    loop = loop_of(g, r)
    # loop = r, sigma(r)=p, ..., r
    seg = loop[1:]
    if seg[0] != p:
        return None
    if all(x < p for x in seg[1:-1]):
        return seg
    return None


@dataclass
class Augmentation:
    braid: Braid
    X: FrozenSet[str]
    _tables: object = field(default=None, repr=False, compare=False)

    @property
    def labels(self):
        return sorted(self.braid.label_of_name(x) for x in self.X)

    def to_json(self):
        return {"braid": str(self.braid), "X": [list(l) for l in self.labels]}

    @classmethod
    def from_labels(cls, braid: Braid, labels: Iterable[Sequence[int]]):
        return cls(braid, frozenset(braid.name_of_label(l) for l in labels))

    @classmethod
    def from_json(cls, data, braid: Optional[Braid] = None):
        braid = braid or Braid.parse(data["braid"])
        return cls.from_labels(braid, data["X"])

    def eval(self, p: Poly) -> int:
        return eval_aug(self, p)

    def B_matrix(self) -> Dict[Tuple[int, int], int]:
        return _eps_B(self.braid, self.X)

    def tables(self):
        if self._tables is None:
            self._tables = _Tables(self.braid.q, self.B_matrix(), lambda x, y: x ^ y,
                                   lambda x, y: x & y, 0)
        return self._tables

    def is_valid(self) -> bool:
        return not validation_failures(self)


def eval_aug(aug: Augmentation, p: Poly) -> int:
    """epsilon_X: crossings in X go to 1, every other generator to 0."""
    if p.ring != Z2:
        p = p.to_z2()
    total = 0
    for _, w, c in p.terms():
        if all(x in aug.X for x in w):
            total ^= c & 1
    return total


def _eps_B(b: Braid, X) -> Dict[Tuple[int, int], int]:
    weights = [1 if x in X else 0 for x in b.crossing_names]
    out = {}
    for i in range(1, b.q + 1):
        st = _path_dp(b, i, 1, lambda k: weights[k], lambda x, y: x ^ y, lambda x, y: x & y, 0)
        for j in range(1, b.q + 1):
            out[(i, j)] = st[j]
    return out


def realized_graph(b: Braid, Y) -> Set[Tuple[int, int]]:
    eps = _eps_B(b, set(Y))
    return {(i, j) for (i, j), v in eps.items() if v}


def eval_BCM_fast(aug: Augmentation, kind: str, i: int, j: int) -> int:
    t = aug.tables()
    if kind == "B":
        return t.B[(i, j)]
    if kind == "C":
        return t.C(i, j)
    if kind == "M":
        return t.M(i, j)
    raise ValueError(f"unknown kind {kind!r}")


def validation_failures(aug: Augmentation) -> List[str]:
    bad = []
    for m in range(1, aug.braid.q + 1):
        if 1 ^ eval_BCM_fast(aug, "C", m, m):
            bad.append(f"a{m}")
    for x in aug.X:
        if not aug.braid.proper(x):
            bad.append(x)
    return bad


def construct_augmentation(b: Braid) -> Augmentation:
    g = augmented_graph(b.permutation())
    X = set()
    for p, plus, minus, _ in g.chords:
        try:
            X.add(b.name_of_label((plus, minus, 1)))
        except Exception as exc:
            raise AugmentationError(f"no crossing labelled ({plus},{minus},1)") from exc
    aug = Augmentation(b, frozenset(X))
    bad = validation_failures(aug)
    if bad:
        raise AugmentationError(f"constructed set fails the augmentation test at {bad}")
    return aug


def euclid_prediction(p: int, q: int) -> List[int]:
    """Block sizes read off the Euclidean algorithm on (p, q)."""
    r_prev, r = q, p % q  # r0
    if r == 0:
        return []
    k0, r_next = divmod(r_prev, r)
    blocks = [r] * (k0 - 1)
    a, b_ = r, r_next
    while b_:
        k, rem = divmod(a, b_)
        blocks += [b_] * k
        a, b_ = b_, rem
    return blocks


def _diagonal_blocks(points: Set[Tuple[int, int]], step: Tuple[int, int]) -> List[int]:
    sizes = []
    for pt in sorted(points):
        prev = (pt[0] - step[0], pt[1] - step[1])
        if prev in points:
            continue
        n = 0
        cur = pt
        while cur in points:
            n += 1
            cur = (cur[0] + step[0], cur[1] + step[1])
        sizes.append(n)
    return sorted(sizes, reverse=True)


def euclid_blocks(p: int, q: int) -> dict:
    """Group the canonical augmentation of the (p, q) torus braid into
    maximal diagonal runs of the crossing grid (m, n) and compare with the
    Euclidean prediction."""
    if p < 2 or q < 2:
        raise ValueError("need p, q >= 2")
    b = Braid.torus(p, q)
    aug = construct_augmentation(b)
    pos = {f"b{torus_position(m, n, q)}": (m, n) for n in range(1, p + 1) for m in range(1, q)}
    points = {pos[x] for x in aug.X}
    observed = _diagonal_blocks(points, (0, 1))
    predicted = sorted(euclid_prediction(p, q), reverse=True)
    return {"p": p, "q": q, "X": sorted(points), "blocks": observed,
            "predicted": predicted, "agree": observed == predicted}
