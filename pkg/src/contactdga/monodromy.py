"""Monodromy of positive braid closures and its 0-1 sequences.

Cyclically moving the first letter of a braid word to the end is realized
by a loop of Legendrian closures.  On the index 0 crossing subalgebra the
induced map sends the first crossing to a C-polynomial of the new braid and
shifts the remaining crossing names down by one.  For torus braids one full
period of such moves gives the closed form

    mu(b_{m,n}) = b_{m,n-1}   (n >= 2),      mu(b_{m,1}) = C_{q,m}.

Arc generators have index 1 and are left out; every map here lives on the
subalgebra generated by the crossings (where the differential vanishes).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Tuple

from .algebra import DGA, ChainMap, Poly, Report, Z2, extend_hom
from .augment import Augmentation, construct_augmentation, eval_BCM_fast
from .series import Series
from .braid import DEFAULT_GUARD, Braid, _cache, _path_dp, _Tables, closure_dga, path_poly_C


class MonodromyError(ValueError):
    pass


def crossing_algebra(b: Braid) -> DGA:
    return DGA(Z2, {x: 0 for x in b.crossing_names}, {}, name=f"crossings({b})")


def conjugate(b: Braid) -> Braid:
    if not b.word:
        raise MonodromyError("the empty braid has nothing to conjugate")
    return Braid(b.q, b.word[1:] + b.word[:1])


def conjugation_holonomy(b: Braid) -> Tuple[ChainMap, Braid]:
    """Map induced by moving the first letter of b to the end.

    Returns the map and the conjugated braid.  The removed crossing goes to
    C'_{m+1,m} of the new braid, every other crossing to its shifted name.
    """
    nb = conjugate(b)
    m = b.word[0]
    names, new = b.crossing_names, nb.crossing_names
    assign = {names[0]: path_poly_C(nb, m + 1, m)}
    for k in range(1, len(names)):
        assign[names[k]] = Poly.gen(Z2, new[k - 1])
    return ChainMap(crossing_algebra(b), crossing_algebra(nb), assign, f"conj({b})"), nb


@dataclass
class LoopMonodromy:
    braid: Braid
    mu: ChainMap
    steps: List[ChainMap] = field(default_factory=list)

    def __call__(self, p: Poly) -> Poly:
        return self.mu(p)

    def to_json(self):
        return {"braid": str(self.braid), "steps": len(self.steps), "mu": self.mu.to_json()}


def loop_monodromy(b: Braid, steps: Optional[int] = None, guard=DEFAULT_GUARD) -> LoopMonodromy:
    """Compose ``steps`` conjugation holonomies (default: the whole word).

    The braid after the last step must equal b, so that the path of knots
    closes up; the crossing names then agree with the original ones.
    """
    steps = len(b.word) if steps is None else steps
    cur = b
    total = ChainMap.identity(crossing_algebra(b))
    maps = []
    for _ in range(steps):
        h, nxt = conjugation_holonomy(cur)
        maps.append(h)
        total = ChainMap(total.source, h.target,
                         {g: extend_hom(h, img, guard) for g, img in total.assignment.items()},
                         "loop")
        cur = nxt
    if cur.word != b.word:
        raise MonodromyError(f"{steps} conjugations do not return to the starting braid")
    mu = ChainMap(total.source, crossing_algebra(b), total.assignment, f"mu({b})")
    return LoopMonodromy(b, mu, maps)


def power(mu: ChainMap, k: int, guard=DEFAULT_GUARD) -> ChainMap:
    out = ChainMap.identity(mu.source)
    for _ in range(k):
        out = ChainMap(out.source, mu.target,
                       {g: extend_hom(mu, img, guard) for g, img in out.assignment.items()},
                       f"{mu.name}^{k}")
    return out


def _check_torus(p, q, warn=True):
    if p < 1 or q < 2:
        raise MonodromyError("need p >= 1 and q >= 2")
    if p % q == 0 or q % p == 0:
        raise MonodromyError(f"({p},{q}): one parameter divides the other, no distinguished orbit")
    if warn and gcd(p, q) > 1:
        warnings.warn(f"({p},{q}) is a torus link, not a knot", stacklevel=3)


def torus_monodromy(p: int, q: int) -> ChainMap:
    """Closed form of the one-period monodromy on the torus braid (p, q)."""
    if p < 1 or q < 2:
        raise MonodromyError("need p >= 1 and q >= 2")
    if gcd(p, q) > 1:
        warnings.warn(f"({p},{q}) is a torus link, not a knot", stacklevel=2)
    b = Braid.torus(p, q)
    assign = {}
    for n in range(1, p + 1):
        for m in range(1, q):
            if n >= 2:
                assign[b.torus_name(m, n)] = Poly.gen(Z2, b.torus_name(m, n - 1))
            else:
                assign[b.torus_name(m, 1)] = path_poly_C(b, q, m)
    alg = crossing_algebra(b)
    return ChainMap(alg, alg, assign, f"mu({p},{q})")


def torus_monodromy_size(p: int, q: int) -> int:
    """Number of path terms in the closed form before mod 2 cancellation;
    an upper bound for the monomial count, found without expanding."""
    b = Braid.torus(p, q)
    base = {}
    for i in range(1, q + 1):
        st = _path_dp(b, i, 1, lambda k: 1, lambda x, y: x + y, lambda x, y: x * y, 0)
        for j in range(1, q + 1):
            base[(i, j)] = st[j]
    t = _Tables(q, base, lambda x, y: x + y, lambda x, y: x * y, 0)
    return (p - 1) * (q - 1) + sum(t.C(q, m) for m in range(1, q))


def _reduced_B(b: Braid, p: int, x: int, y: int) -> Poly:
    """Homology representative of mu(B_{x,y}) given by the shift rule."""
    q = b.q
    B = _cache(b, "B")
    bp = Poly.gen(Z2, b.torus_name(y - 1, p)) if y >= 2 else None
    if x >= 2 and y >= 2:
        return B[(x - 1, y - 1)] + B[(x - 1, q)] * bp
    if x >= 2:
        return B[(x - 1, q)]
    if y >= 2:
        return bp
    raise MonodromyError("B_{1,1} has no shift rule")


def boundary_witness(b: Braid, p: int, j: int) -> Poly:
    """h with d(h) = mu(B_{1,j}) - b_{j-1,p} in the closure DGA."""
    q = b.q
    return (path_poly_C(b, q, j - 1) * Poly.gen(Z2, f"a{j - 1}")
            + Poly.gen(Z2, f"a{q}") * Poly.gen(Z2, b.torus_name(j - 1, p)))


class _Broken:
    """Stands in for B_{1,1}; any arithmetic with it is a bug."""

    def __add__(self, other):
        raise MonodromyError("B_{1,1} entered a mu(B, C, M) row")

    __radd__ = __mul__ = __rmul__ = __add__


def _triple_add(u, v):
    if isinstance(u, _Broken) or isinstance(v, _Broken):
        raise MonodromyError("B_{1,1} entered a mu(B, C, M) row")
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def _triple_mul(u, v):
    # (X, Y, H) with dH = X - Y and X, Y cycles: product keeps the invariant
    if isinstance(u, _Broken) or isinstance(v, _Broken):
        raise MonodromyError("B_{1,1} entered a mu(B, C, M) row")
    return (u[0] * v[0], u[1] * v[1], u[1] * v[2] + u[2] * v[0])


def _eps_weighted_B(b: Braid, weights) -> Dict[Tuple[int, int], int]:
    out = {}
    for i in range(1, b.q + 1):
        st = _path_dp(b, i, 1, lambda k: weights[k], lambda x, y: x ^ y, lambda x, y: x & y, 0)
        for j in range(1, b.q + 1):
            out[(i, j)] = st[j]
    return out


def _series_tables(q, base):
    return _Tables(q, base, lambda u, v: u + v, lambda u, v: u * v, Series.zero())


def check_muBCM(p: int, q: int, guard=DEFAULT_GUARD, certify_upto: int = 6) -> Dict[str, Report]:
    """Verify how mu acts on B-, C- and M-polynomials of the torus braid.

    Exact polynomial identities:
      B:    mu(B_ij) = B_{i-1,j-1} + B_{i-1,q} b_{j-1,p}   (i, j >= 2)
      B_i1: mu(B_i1) = B_{i-1,q}                           (i >= 2)
    The row mu(B_1j) = b_{j-1,p} (j >= 2) holds in homology only.  It is
    checked with the canonical augmentation, and exactly through the
    primitive h = C_{q,j-1} a_{j-1} + a_q b_{j-1,p}:
      mu(B_1j) - b_{j-1,p} = d(h) = C_{q,j-1} d(a_{j-1}) + d(a_q) b_{j-1,p}.

    The C, C_i1 and M rows follow from the B rows, so they are homology
    statements too.  For each of them:
      * the identity is checked exactly after every mu(B_xy) is replaced by
        its shift-rule representative (the combinatorial content);
      * the augmentation is applied to both sides;
      * when p + q <= certify_upto, the full image is expanded together with
        a primitive H and d(H) = mu(lhs) - rhs is checked exactly.
    Path polynomials are compared as minimized linear representations
    (``series.Series``), which stays exact where expansion is hopeless.
    """
    b = Braid.torus(p, q)
    B = _cache(b, "B")
    S = {k: Series.from_poly(v) for k, v in B.items()}
    TS = _series_tables(q, S)
    certify = p + q <= certify_upto
    if certify:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mu = torus_monodromy(p, q)
        dga = closure_dga(b, guard)
    first = b.crossing_names[:q - 1]
    shift = {b.torus_name(m, n): b.torus_name(m, n - 1) for n in range(2, p + 1) for m in range(1, q)}
    aug = construct_augmentation(b)
    aug_t = aug.tables()
    one = Series.const(1)

    # mu on generators, as series; epsilon o mu as weights on crossings
    mu_s = {name: TS.C(q, k + 1) for k, name in enumerate(first)}
    mu_s.update({name: Series.gen(img) for name, img in shift.items()})
    weights = [aug_t.C(q, k + 1) if k < q - 1 else int(shift[name] in aug.X)
               for k, name in enumerate(b.crossing_names)]
    eps_mu = _eps_weighted_B(b, weights)

    def mu_series(poly):
        acc = Series.zero()
        for _, w, _ in poly.terms():
            t = one
            for x in w:
                t = t * mu_s[x]
            acc = acc + t
        return acc

    reps = {k: Report(k) for k in ("B", "B_i1", "B_1j", "C", "C_i1", "M")}
    rng = range(1, q + 1)
    keys = [(x, y) for x in rng for y in rng if (x, y) != (1, 1)]
    red = {k: _reduced_B(b, p, *k) for k in keys}
    muB = {}
    for (x, y) in keys:
        if x >= 2:
            # no first-period crossing may occur; mu only renames the rest
            key = "B" if y >= 2 else "B_i1"
            reps[key].checked += 1
            if B[(x, y)].generators() & set(first):
                reps[key].fail(f"B{x},{y}", "contains a first-period crossing")
                continue
            img = muB[(x, y)] = B[(x, y)].rename(shift)
            if img != red[(x, y)]:
                reps[key].fail(f"B{x},{y}", f"{img} != {red[(x, y)]}")
            continue
        reps["B_1j"].checked += 1
        if eps_mu[(1, y)] != aug.eval(red[(1, y)]):
            reps["B_1j"].fail(f"B1,{y}", "augmentation differs")
        bp = Series.gen(b.torus_name(y - 1, p))
        d_h = TS.C(q, y - 1) * (one + TS.C(y - 1, y - 1)) + (one + TS.C(q, q)) * bp
        if mu_series(B[(1, y)]) + bp != d_h:
            reps["B_1j"].fail(f"B1,{y}", "primitive does not bound the difference")
        if certify:
            img = muB[(1, y)] = extend_hom(mu, B[(1, y)], guard)
            if dga.d(boundary_witness(b, p, y)) != img + red[(1, y)]:
                reps["B_1j"].fail(f"B1,{y}", "expanded primitive does not bound the difference")

    redT = _series_tables(q, {**{k: Series.from_poly(v) for k, v in red.items()},
                              (1, 1): Series.zero()})
    epsT = _Tables(q, eps_mu, lambda x, y: x ^ y, lambda x, y: x & y, 0)
    if certify:
        zero = Poly.zero(Z2)
        base = {k: (muB[k], red[k], zero) for k in muB}
        for y in range(2, q + 1):
            base[(1, y)] = (muB[(1, y)], red[(1, y)], boundary_witness(b, p, y))
        base[(1, 1)] = _Broken()
        fullT = _Tables(q, base, _triple_add, _triple_mul, (zero, zero, zero))
        T = _cache(b, "T", guard)

    def row(key, label, get, rhs, eps_rhs):
        reps[key].checked += 1
        if get(redT) != rhs[0]:
            reps[key].fail(label, "shift-rule identity fails")
        if get(epsT) != eps_rhs:
            reps[key].fail(label, "augmentation differs")
        if certify:
            X, Y, H = get(fullT)
            if Y != rhs[1](T) or dga.d(H) != X + Y:
                reps[key].fail(label, "primitive does not bound the difference")

    for i in range(2, q + 1):
        for j in range(2, q + 1):
            row("M", f"M{i},{j}", lambda t: t.M(i, j),
                (TS.M(i - 1, j - 1), lambda t: t.M(i - 1, j - 1)), aug_t.M(i - 1, j - 1))
        row("C_i1", f"C{i},1", lambda t: t.C(i, 1),
            (TS.M(i - 1, q), lambda t: t.M(i - 1, q)), aug_t.M(i - 1, q))
        for j in range(2, i):
            row("C", f"C{i},{j}", lambda t: t.C(i, j),
                (TS.C(i - 1, j - 1), lambda t: t.C(i - 1, j - 1)), aug_t.C(i - 1, j - 1))
    return reps


# ---------------------------------------------------------------------------
# orbits and 0-1 sequences

def distinguished_m(p: int, q: int) -> int:
    _check_torus(p, q)
    return p if q > p else p % q


def orbit_labels(p: int, q: int, m: Optional[int] = None) -> List[Tuple[str, int, int]]:
    """The p+q elements of the orbit of b_{m,p}, as (kind, i, j)."""
    m = distinguished_m(p, q) if m is None else m
    out = [("b", m, n) for n in range(p, 0, -1)]
    out += [("C", q - k, m - k) for k in range(m)]
    out += [("M", q - m - k, q - k) for k in range(q - m)]
    return out


def _eval_label(aug: Augmentation, b: Braid, kind, i, j) -> int:
    if kind == "b":
        return int(b.torus_name(i, j) in aug.X)
    return eval_BCM_fast(aug, kind, i, j)


def _pulled_back_weights(b: Braid, p: int, weights: List[int]) -> List[int]:
    """Weights of (phi o mu) on crossings, given the weights of phi.

    phi is an algebra map to Z/2, so phi(mu(b_{m,1})) = phi(C_{q,m}) is read
    off Z/2 path tables built from phi.
    """
    q = b.q
    t = _Tables(q, _eps_weighted_B(b, weights), lambda x, y: x ^ y, lambda x, y: x & y, 0)
    col = {name: k for k, name in enumerate(b.crossing_names)}
    out = []
    for k, name in enumerate(b.crossing_names):
        if k < q - 1:
            out.append(t.C(q, k + 1))
        else:
            m, n = k % (q - 1) + 1, k // (q - 1) + 1
            out.append(weights[col[b.torus_name(m, n - 1)]])
    return out


def orbit_sequence(p: int, q: int, aug: Optional[Augmentation] = None, mode: str = "closed",
                   guard=DEFAULT_GUARD) -> List[int]:
    """epsilon along the distinguished orbit of b_{m,p}.

    ``closed``     evaluates the closed-form orbit elements on Z/2 tables;
    ``iterate``    follows epsilon o mu^k as weights on crossings, applying
                   the monodromy one step at a time;
    ``substitute`` iterates mu on b_{m,p} symbolically and evaluates each
                   image (only practical when p + q is small).
    """
    b = Braid.torus(p, q)
    m = distinguished_m(p, q)
    if aug is None:
        aug = construct_augmentation(b)
    elif aug.braid != b:
        raise MonodromyError("augmentation belongs to a different braid")
    g = b.torus_name(m, p)
    if mode == "closed":
        return [_eval_label(aug, b, *lab) for lab in orbit_labels(p, q, m)]
    if mode == "iterate":
        w = [int(x in aug.X) for x in b.crossing_names]
        k = b.crossing_names.index(g)
        seq = []
        for _ in range(p + q):
            seq.append(w[k])
            w = _pulled_back_weights(b, p, w)
        return seq
    if mode == "substitute":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mu = torus_monodromy(p, q)
        x = Poly.gen(Z2, g)
        seq = []
        for _ in range(p + q):
            seq.append(aug.eval(x))
            x = extend_hom(mu, x, guard)
        return seq
    raise ValueError(f"unknown mode {mode!r}")


def pattern_case(p: int, q: int) -> int:
    _check_torus(p, q, warn=False)
    if q > p:
        return 1 if 2 * p <= q else 2
    r0 = p % q
    return 3 if 2 * r0 < q else 4


def predicted_pattern(p: int, q: int) -> List[int]:
    """0-1 sequence predicted by case analysis on (p, q)."""
    case = pattern_case(p, q)
    if case == 1:
        return [1] * p + [1] * p + [0] * p + [1] * (q - 2 * p)
    if case == 2:
        return [0] * (2 * p - q) + [1] * (q - p) + [1] * p + [0] * (q - p)
    r0 = p % q
    if case == 3:
        return [0] * (p - r0) + [1] * r0 + [1] * r0 + [1] * (q - 2 * r0) + [0] * r0
    return [0] * (p - q + r0) + [1] * (q - r0) + [1] * r0 + [0] * (q - r0)


def refined_pattern(p: int, q: int) -> List[int]:
    """0-1 sequence with the M-part read from the rotation sigma(i) = i - r0.

    Agrees with ``predicted_pattern`` for q > p.  For q < p the M-part is
    that of the pair (r0, q): all ones when r0 divides q, otherwise r0 zeros
    followed by q - 2 r0 ones (2 r0 < q) or q - r0 zeros (2 r0 > q).
    """
    case = pattern_case(p, q)
    if case <= 2:
        return predicted_pattern(p, q)
    r0 = p % q
    stated = predicted_pattern(p, q)
    head = stated[:p + r0]
    if q % r0 == 0:
        tail = [1] * (q - r0)
    elif 2 * r0 < q:
        tail = [0] * r0 + [1] * (q - 2 * r0)
    else:
        tail = [0] * (q - r0)
    return head + tail


def minimal_period(seq) -> int:
    """Smallest cyclic shift d > 0 leaving seq unchanged."""
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and all(seq[i] == seq[(i + d) % n] for i in range(n)):
            return d
    return n


def order_bounds(p: int, q: int, chain_checks_upto: int = 10) -> dict:
    """Divisibility and lower bound for the order of mu.

    Upper side: every step of the orbit table is one of the rows checked by
    ``check_muBCM`` (run when p + q <= chain_checks_upto), so mu^(p+q) fixes
    each orbit element in homology.  Lower side: the minimal cyclic period of
    the 0-1 sequence divides the order.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        seq = orbit_sequence(p, q)
    per = minimal_period(seq)
    out = {"p": p, "q": q, "sequence": "".join(map(str, seq)), "minimal_period": per,
           "divides": p + q, "lower_bound": per, "divides_pq": (p + q) % per == 0,
           "case": pattern_case(p, q), "knot": gcd(p, q) == 1,
           "warnings": [str(w.message) for w in caught]}
    if p + q <= chain_checks_upto:
        reps = check_muBCM(p, q)
        out["orbit_steps_verified"] = all(reps.values())
    return out
