"""Holonomy chain maps of Reidemeister moves of Lagrangian projections.

A move is described by a ``MoveEvent`` which carries the data the maps
need (roles of the crossings, signs, winding, the relabelling of the
untouched crossings, a height order).  Differentials are never derived
from geometry here; the DGAs before and after the move are supplied.

Conventions for the bigon pair (a, b) of a II / II^-1 move: the DGA with
the pair is A, the one without it is A'.  In A, d(a) = s*b + v where
s = +-1 and v avoids a and b.

    tau : A -> A'      a -> 0,  b -> -s v',  x -> x'
    phi : A' -> A      b_j' -> b_j below the pair,
                       a_i' -> a_i + K(d a_i) above it (increasing height)
    K   : (phi tau, id)-derivation,  K(b) = -s a,  K = 0 elsewhere

so that tau phi = id and K d + d K = phi tau - id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import (DGA, LAURENT, Z2, ChainMap, Derivation, Poly, Report,
                      check_chain_homotopy, check_chain_map, parse_poly)

KINDS = ("IIIa", "IIIb", "IIinv", "II")


class MoveError(ValueError):
    pass


@dataclass
class MoveEvent:
    kind: str
    roles: Dict[str, str]
    relabel: Dict[str, str] = field(default_factory=dict)
    signs: Optional[Tuple[int, ...]] = None
    k: int = 0
    v: Optional[str] = None
    order: Optional[List[str]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MoveError(f"unknown move kind {self.kind!r}")
        need = {"IIIa": (), "IIIb": ("a", "b", "c"), "IIinv": ("a", "b"), "II": ("a", "b")}
        missing = [r for r in need[self.kind] if r not in self.roles]
        if missing:
            raise MoveError(f"{self.kind} move needs roles {missing}")
        if self.signs is not None:
            self.signs = tuple(int(s) for s in self.signs)
            if any(s not in (1, -1) for s in self.signs):
                raise MoveError("signs must be +1 or -1")

    def to_json(self):
        out = {"kind": self.kind, "roles": dict(self.roles), "relabel": dict(self.relabel)}
        if self.signs is not None:
            out["signs"] = list(self.signs)
        if self.k:
            out["k"] = self.k
        if self.v is not None:
            out["v"] = self.v
        if self.order is not None:
            out["order"] = list(self.order)
        return out

    @classmethod
    def from_json(cls, data):
        return cls(data["kind"], dict(data.get("roles", {})), dict(data.get("relabel", {})),
                   data.get("signs"), int(data.get("k", 0)), data.get("v"), data.get("order"))

    def reduce_mod2(self) -> "MoveEvent":
        """Same event with sign and winding data forgotten."""
        v = None if self.v is None else str(parse_poly(LAURENT, self.v).to_z2())
        return MoveEvent(self.kind, dict(self.roles), dict(self.relabel), None, 0, v,
                         None if self.order is None else list(self.order))


@dataclass
class Holonomy:
    map: ChainMap
    events: List[MoveEvent] = field(default_factory=list)

    @property
    def source(self):
        return self.map.source

    @property
    def target(self):
        return self.map.target

    def __call__(self, p: Poly) -> Poly:
        return self.map(p)

    def __getitem__(self, g):
        return self.map[g]

    def check(self) -> Report:
        return check_chain_map(self.map)

    def to_json(self):
        return {"map": {g: str(p) for g, p in self.map.assignment.items()},
                "events": [e.to_json() for e in self.events]}

    def reduce_mod2(self) -> "Holonomy":
        m = self.map
        z = ChainMap(m.source.reduce_mod2(), m.target.reduce_mod2(),
                     {g: p.to_z2() for g, p in m.assignment.items()}, m.name)
        return Holonomy(z, [e.reduce_mod2() for e in self.events])


def _renaming(e: MoveEvent, source: DGA, drop: Iterable[str] = ()) -> Dict[str, str]:
    drop = set(drop)
    out = {}
    for g in source.generators:
        if g not in drop:
            out[g] = e.relabel.get(g, g)
    if len(set(out.values())) != len(out):
        raise MoveError("relabeling is not injective")
    return out


def _relabel_map(source: DGA, target: DGA, ren: Mapping[str, str]) -> Dict[str, Poly]:
    ring = source.ring
    for g, h in ren.items():
        if h not in target.generators:
            raise MoveError(f"{g} is relabeled to {h}, which is not a generator of the target")
        if target.index(h) != source.index(g) and not target.same_index(target.index(h),
                                                                       source.index(g)):
            raise MoveError(f"relabeling {g} -> {h} changes the index")
    return {g: Poly.gen(ring, h) for g, h in ren.items()}


def _check_roles(e: MoveEvent, dga: DGA, roles: Sequence[str]):
    for r in roles:
        g = e.roles[r]
        if g not in dga.generators:
            raise MoveError(f"role {r}={g} is not a generator of {dga.name or 'the DGA'}")


def holonomy_IIIa(e: MoveEvent, source: DGA, target: DGA) -> Holonomy:
    if e.kind != "IIIa":
        raise MoveError("not a IIIa event")
    ren = _renaming(e, source)
    return Holonomy(ChainMap(source, target, _relabel_map(source, target, ren), "IIIa"), [e])


def relabeling(source: DGA, mapping: Mapping[str, str], target: Optional[DGA] = None) -> Holonomy:
    """Pure renaming of generators (no move); the target defaults to the
    renamed source."""
    ren = {g: mapping.get(g, g) for g in source.generators}
    if len(set(ren.values())) != len(ren):
        raise MoveError("relabeling is not injective")
    target = target or source.renamed(ren)
    return Holonomy(ChainMap(source, target, _relabel_map(source, target, ren), "relabel"))


def holonomy_IIIb(e: MoveEvent, source: DGA, target: DGA) -> Holonomy:
    """a -> a' - e_a e_b e_c t^k c'b' (over Z2: a -> a' + c'b')."""
    if e.kind != "IIIb":
        raise MoveError("not a IIIb event")
    _check_roles(e, source, "abc")
    ring = source.ring
    ren = _renaming(e, source)
    imgs = _relabel_map(source, target, ren)
    a, b, c = (e.roles[r] for r in "abc")
    cb = Poly.word(ring, [ren[c], ren[b]])
    if ring == Z2:
        imgs[a] = imgs[a] + cb
    else:
        if e.signs is None or len(e.signs) != 3:
            raise MoveError("IIIb over Z[t,t^-1] needs the sign triple")
        s = e.signs[0] * e.signs[1] * e.signs[2]
        imgs[a] = imgs[a] - cb.scale(s, e.k)
    return Holonomy(ChainMap(source, target, imgs, "IIIb"), [e])


def inverse_IIIb(e: MoveEvent, opposite_signs: Sequence[int]) -> MoveEvent:
    """The event of the reverse triangle move; the opposite quadrant signs
    must satisfy e e' = -1."""
    if e.signs is not None:
        prod = 1
        for s in list(e.signs) + list(opposite_signs):
            prod *= s
        if prod != -1:
            raise MoveError("sign triples of inverse IIIb moves must multiply to -1")
    back = {v: k for k, v in e.relabel.items()}
    roles = {r: e.relabel.get(g, g) for r, g in e.roles.items()}
    return MoveEvent("IIIb", roles, back, tuple(opposite_signs), e.k, None, None)


def pair_sign(dga: DGA, a: str, b: str) -> Tuple[int, Poly]:
    """(s, v) with d(a) = s*b + v, v free of a and b."""
    da = dga.diff[a]
    ring = dga.ring
    s = 0
    rest = {}
    for ex, w, c in da.terms():
        if w == (b,) and ex == 0:
            s = c
        else:
            rest[(ex, w)] = c
    if ring == Z2:
        s &= 1
    if s not in (1, -1):
        raise MoveError(f"d({a}) does not contain {b} with a unit coefficient")
    v = Poly(ring, rest)
    if {a, b} & v.generators():
        raise MoveError(f"d({a}) - ({s}){b} still involves {a} or {b}")
    if dga.index(a) != dga.index(b) + 1 and not dga.same_index(dga.index(a), dga.index(b) + 1):
        raise MoveError(f"|{a}| must equal |{b}| + 1")
    return s, v


def _event_sign(e: MoveEvent, dga: DGA) -> Tuple[int, Poly]:
    a, b = e.roles["a"], e.roles["b"]
    s, v = pair_sign(dga, a, b)
    if dga.ring != Z2 and e.signs is not None:
        es = e.signs[0] * e.signs[1] if len(e.signs) > 1 else e.signs[0]
        if es != s:
            raise MoveError(f"event signs give {es} but d({a}) has {s}*{b}")
    if e.v is not None:
        given = parse_poly(dga.ring, e.v)
        if given != v:
            raise MoveError(f"event v = {given} but d({a}) gives v = {v}")
    return s, v


def contracted_dga(e: MoveEvent, big: DGA, name: str = "") -> DGA:
    """The DGA without the bigon pair: d'(x') = tau(d x)."""
    tau = _tau_assignment(e, big)
    ren = _renaming(e, big, drop=(e.roles["a"], e.roles["b"]))
    gens = {ren[g]: big.index(g) for g in ren}
    free = DGA(big.ring, gens, {}, big.maslov)
    m = ChainMap(big, free, tau)
    diff = {ren[g]: m(big.diff[g]) for g in ren}
    return DGA(big.ring, gens, diff, big.maslov, name)


def _tau_assignment(e, big):
    s, v = _event_sign(e, big)
    a, b = e.roles["a"], e.roles["b"]
    ren = _renaming(e, big, drop=(a, b))
    ring = big.ring
    out = {g: Poly.gen(ring, h) for g, h in ren.items()}
    out[a] = Poly.zero(ring)
    out[b] = v.rename(ren) if ring == Z2 else v.rename(ren).scale(-s)
    return out


def holonomy_IIinv(e: MoveEvent, source: DGA, target: Optional[DGA] = None) -> Holonomy:
    """The map tau removing the bigon pair (a, b) of ``source``."""
    if e.kind not in ("IIinv", "II"):
        raise MoveError("not a II^-1 event")
    _check_roles(e, source, "ab")
    if target is None:
        target = contracted_dga(e, source)
    tau = _tau_assignment(e, source)
    for g, img in tau.items():
        unknown = img.generators() - target.generators.keys()
        if unknown:
            raise MoveError(f"tau({g}) uses {sorted(unknown)}, missing from the target")
    return Holonomy(ChainMap(source, target, tau, "tau"), [e])


def height_order(e: MoveEvent, dga: DGA) -> List[str]:
    if not e.order:
        raise MoveError("II move needs a height ordering of the generators")
    order = list(e.order)
    missing = set(dga.generators) - set(order)
    if missing:
        raise MoveError(f"height order misses {sorted(missing)}")
    a, b = e.roles["a"], e.roles["b"]
    if order.index(a) != order.index(b) + 1:
        raise MoveError("a must directly follow b in the height order")
    return order


@dataclass
class IIData:
    """Everything built for one II move: phi, tau, K."""
    event: MoveEvent
    small: DGA
    big: DGA
    phi: ChainMap
    tau: ChainMap
    phitau: ChainMap
    K: Derivation


def build_II(e: MoveEvent, small: DGA, big: DGA) -> IIData:
    """Construct phi : small -> big with tau and the homotopy K.

    ``e.roles`` name the pair in ``big``; ``e.relabel`` maps generators of
    ``big`` to their names in ``small``.  The generators above a are
    processed by increasing height: phi(a_i') = a_i + K(d a_i), where K
    only needs phi tau on strictly lower generators.
    """
    if e.kind not in ("II", "IIinv"):
        raise MoveError("not a II event")
    _check_roles(e, big, "ab")
    order = height_order(e, big)
    s, v = _event_sign(e, big)
    ring = big.ring
    a, b = e.roles["a"], e.roles["b"]
    tau_h = holonomy_IIinv(MoveEvent("IIinv", e.roles, e.relabel, e.signs, 0, e.v), big, small)
    tau = tau_h.map
    ren = _renaming(e, big, drop=(a, b))
    pos = order.index(a)
    phi_img: Dict[str, Poly] = {}
    pt: Dict[str, Poly] = {}       # phi o tau on generators of big
    for g in order[:pos - 1]:
        phi_img[ren[g]] = Poly.gen(ring, g)
        pt[g] = Poly.gen(ring, g)
    k_b = Poly.gen(ring, a).scale(-s) if ring != Z2 else Poly.gen(ring, a)
    pt[a] = Poly.zero(ring)
    pt[b] = (v.scale(-s) if ring != Z2 else v)
    # left map of K grows as we climb; d(a_i) only sees lower generators
    scratch = ChainMap(big, big, {g: pt.get(g, Poly.zero(ring)) for g in big.generators})
    K = Derivation(scratch, ChainMap.identity(big), {b: k_b}, "K")
    for g in order[pos + 1:]:
        dg = big.diff[g]
        bad = dg.generators() - set(order[:order.index(g)])
        if bad:
            raise MoveError(f"d({g}) involves {sorted(bad)}, not lower in the height order")
        img = Poly.gen(ring, g) + K(dg)
        phi_img[ren[g]] = img
        pt[g] = img
        scratch.assignment[g] = img
    phi = ChainMap(small, big, phi_img, "phi")
    phitau = ChainMap(big, big, pt, "phi.tau")
    K = Derivation(phitau, ChainMap.identity(big), {b: k_b}, "K")
    return IIData(e, small, big, phi, tau, phitau, K)


def holonomy_II(e: MoveEvent, source: DGA, target: DGA) -> Holonomy:
    """The map phi of a II move from ``source`` (no pair) to ``target``."""
    if e.kind != "II":
        raise MoveError("not a II event")
    return Holonomy(build_II(e, source, target).phi, [e])


def holonomy(e: MoveEvent, source: DGA, target: Optional[DGA] = None) -> Holonomy:
    if e.kind == "IIIa":
        return holonomy_IIIa(e, source, target)
    if e.kind == "IIIb":
        return holonomy_IIIb(e, source, target)
    if e.kind == "IIinv":
        return holonomy_IIinv(e, source, target)
    return holonomy_II(e, source, target)


def _same_dga(x: DGA, y: DGA) -> bool:
    return (x is y) or (x.ring == y.ring and x.generators == y.generators and x.diff == y.diff)


def compose(hs: Sequence[Holonomy], dga: Optional[DGA] = None) -> Holonomy:
    """Holonomy of a path: apply hs[0] first."""
    if not hs:
        if dga is None:
            raise MoveError("empty composition needs a DGA")
        return Holonomy(ChainMap.identity(dga))
    out = hs[0].map
    events = list(hs[0].events)
    for h in hs[1:]:
        if not _same_dga(out.target, h.source):
            raise MoveError(f"cannot compose: {out.target!r} is not {h.source!r}")
        out = out.then(h.map, name=f"{h.map.name}.{out.name}")
        events += h.events
    return Holonomy(out, events)


def verify_homotopy_pair(e: MoveEvent, small: DGA, big: DGA) -> Report:
    """tau phi = id on small, K d + d K = phi tau - id on big, and both
    maps are chain maps."""
    data = build_II(e, small, big)
    rep = Report("II pair")
    tp = data.phi.then(data.tau)
    for g in small.generators:
        rep.checked += 1
        if tp[g] != Poly.gen(small.ring, g):
            rep.fail(g, f"tau(phi({g})) = {tp[g]}")
    for sub in (check_chain_map(data.phi), check_chain_map(data.tau),
                check_chain_homotopy(data.K)):
        rep.checked += sub.checked
        for item, detail in sub.failures:
            rep.fail(f"{sub.name}:{item}", detail)
    pair = (e.roles["a"], e.roles["b"])
    for g in big.generators:
        h = e.relabel.get(g, g)
        if g in pair or big.diff[g] or h not in data.phi.assignment:
            continue
        rep.checked += 1
        if data.phi[h] != Poly.gen(big.ring, g):
            rep.fail(g, "cycle not mapped to itself")
    return rep


# --- the loop of trefoils ----------------------------------------------------

_LOOP_DIFFS = {
    "D0": {"a1": "1 - b1 - b3 - t b1 b2 b3",
           "a2": "1 - b2 + t^-1 + b2 b3 + b1 b2 + t b2 b3 b1 b2"},
    "D1": {"a1": "1 - b1 - b3 - t b1 b2 b3",
           "a2": "1 - b2 - c1 - t b2 b3 c1",
           "d": "c1 + t^-1 + b1 b2"},
    "D2": {"a1": "1 - b1 - b3 - t b1 b2 b3",
           "a2": "1 - b2 - c1 - t b2 b3 c1",
           "d": "t^-1 + b1 b2 + b1 c1 + b3 c1 + t b1 b2 b3 c1"},
    "D3": {"a1": "1 - b1 - b3 - t b1 b2 b3",
           "a2": "1 - b2 - c1 - t b2 b3 c1",
           "d": "b1 + t^-1 + b3 c1"},
    "D4": {"a1": "1 - b3 + t^-1 + b3 c1 + b2 b3 + t b3 c1 b2 b3",
           "a2": "1 - b2 - c1 - t b2 b3 c1"},
}

_LOOP_GENS = {
    "D0": ["a1", "a2", "b1", "b2", "b3"],
    "D1": ["a1", "a2", "b1", "b2", "b3", "c1", "d"],
    "D2": ["a1", "a2", "b1", "b2", "b3", "c1", "d"],
    "D3": ["a1", "a2", "b1", "b2", "b3", "c1", "d"],
    "D4": ["a1", "a2", "b2", "b3", "c1"],
}

LOOP_EVENTS = [
    MoveEvent("II", {"a": "d", "b": "c1"}, signs=(1, 1), v="t^-1 + b1 b2",
              order=["b1", "b2", "b3", "c1", "d", "a1", "a2"]),
    MoveEvent("IIIb", {"a": "d", "b": "c1", "c": "a1"}, signs=(1, 1, -1)),
    MoveEvent("IIIb", {"a": "d", "b": "a2", "c": "b1"}, signs=(1, 1, 1)),
    MoveEvent("IIinv", {"a": "d", "b": "b1"}, signs=(1, 1), v="t^-1 + b3 c1"),
]

# D4 is the original trefoil after renaming
LOOP_RELABEL = {"a1": "a2", "a2": "a1", "b2": "b1", "b3": "b2", "c1": "b3"}


def loop_dga(name: str, ring: str = LAURENT) -> DGA:
    gens = {g: (1 if g[0] in "ad" else 0) for g in _LOOP_GENS[name]}
    diff = {g: parse_poly(LAURENT, s) for g, s in _LOOP_DIFFS[name].items()}
    dga = DGA(LAURENT, gens, diff, 0, name)
    return dga if ring == LAURENT else dga.reduce_mod2()


def trefoil_dga(ring: str = LAURENT) -> DGA:
    return loop_dga("D0", ring)


def loop_holonomies(ring: str = LAURENT) -> List[Holonomy]:
    """The four move holonomies D0 -> D1 -> D2 -> D3 -> D4."""
    ds = [loop_dga(f"D{i}", ring) for i in range(5)]
    out = []
    for i, e in enumerate(LOOP_EVENTS):
        if ring == Z2:
            e = e.reduce_mod2()
        out.append(holonomy(e, ds[i], ds[i + 1]))
    return out


def loop_monodromy_trefoil(ring: str = LAURENT) -> Holonomy:
    hs = loop_holonomies(ring)
    back = relabeling(hs[-1].target, LOOP_RELABEL, trefoil_dga(ring))
    return compose(hs + [back])


def loop_diagrams():
    """Diagrams D0..D4 of the loop, produced by surgery, with the LP move
    descriptions (lp.MoveSpec) for each step."""
    from .diagram import bigon_removal, build_diagram, builtin_spec, finger_move, triangle_move
    from .lp import MoveSpec

    d0 = build_diagram(builtin_spec("trefoil"))
    d1 = build_diagram(finger_move(d0, ("b3", 3), ("a1", 1), ("d", "c1"), False,
                                   {"c1": 0, "d": 1}))
    d2 = build_diagram(triangle_move(d1, d1.find_region(["a1", "c1", "d"]).id))
    d3 = build_diagram(triangle_move(d2, d2.find_region(["a2", "b1", "d"]).id))
    d4 = build_diagram(bigon_removal(d3, d3.find_region(["b1", "d"]).id))
    moves = [MoveSpec("II", "U2", [["a2", 2], ["b1", 1], ["a1", 1]]),
             MoveSpec("IIIb", ["a1", "c1", "d"], vertex="d"),
             MoveSpec("IIIb", ["a2", "b1", "d"], vertex="d"),
             MoveSpec("IIinv", ["b1", "d"])]
    return [d0, d1, d2, d3, d4], moves
