"""Positive braids and the Z2 DGA of their Legendrian closures.

Strand positions are numbered 1..q from the top.  The letter ``m`` is a
crossing between positions m and m+1; the strand entering at m leaves at
m+1 and is the over strand.  Crossings are named ``b1, b2, ...`` by their
position in the word, and the closing arcs carry ``a1..aq``.

Path polynomials: a path entering a crossing at the top position may turn
and stay on top (collecting the crossing as a factor) or follow its strand
down; a path entering at the bottom must follow its strand up.
"""

from __future__ import annotations

import itertools
import re
from functools import cached_property
from math import gcd
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .algebra import DGA, Poly, SizeGuardExceeded, Z2
from .diagram import Diagram, build_diagram

DEFAULT_GUARD = 10 ** 6


class BraidError(ValueError):
    pass


class Braid:
    def __init__(self, q: int, word: Sequence[int] = ()):
        q = int(q)
        if q < 1:
            raise BraidError("a braid needs at least one strand")
        word = tuple(int(m) for m in word)
        for m in word:
            if not 1 <= m <= q - 1:
                raise BraidError(f"generator {m} out of range for {q} strands")
        self.q = q
        self.word = word
        self.torus_pq: Optional[Tuple[int, int]] = None

    @classmethod
    def torus(cls, p: int, q: int) -> "Braid":
        """(sigma_1 ... sigma_{q-1})^p on q strands."""
        if p < 1 or q < 1:
            raise BraidError("torus parameters must be positive")
        b = cls(q, list(range(1, q)) * p)
        b.torus_pq = (p, q)
        return b

    @classmethod
    def parse(cls, text: str) -> "Braid":
        text = text.strip()
        m = re.fullmatch(r"torus\s+(\d+)\s+(\d+)", text)
        if m:
            return cls.torus(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"q\s*=\s*(\d+)\s*;\s*w\s*=\s*([\d\s]*)", text)
        if not m:
            raise BraidError(f"cannot parse braid {text!r}")
        return cls(int(m.group(1)), [int(x) for x in m.group(2).split()])

    def __str__(self):
        if self.torus_pq:
            return "torus %d %d" % self.torus_pq
        return f"q={self.q}; w={' '.join(map(str, self.word))}"

    def __repr__(self):
        return f"Braid({self})"

    def __eq__(self, other):
        return isinstance(other, Braid) and (self.q, self.word) == (other.q, other.word)

    def __hash__(self):
        return hash((self.q, self.word))

    def __len__(self):
        return len(self.word)

    @property
    def crossing_names(self) -> List[str]:
        return [f"b{k + 1}" for k in range(len(self.word))]

    @property
    def arc_names(self) -> List[str]:
        return [f"a{m}" for m in range(1, self.q + 1)]

    @cached_property
    def _strands(self):
        # strand_at[pos] = left label of the strand currently at pos (1-based)
        at = list(range(self.q + 1))
        over_under = []
        for m in self.word:
            over_under.append((at[m], at[m + 1]))
            at[m], at[m + 1] = at[m + 1], at[m]
        final = {at[pos]: pos for pos in range(1, self.q + 1)}
        return over_under, final

    def permutation(self) -> Tuple[int, ...]:
        """sigma as a tuple: sigma[i-1] is the right endpoint of the strand starting at i."""
        _, final = self._strands
        return tuple(final[i] for i in range(1, self.q + 1))

    @cached_property
    def labels(self) -> List[Tuple[int, int, int]]:
        """(i, j, t): left label of the over strand, right label of the under strand, occurrence."""
        over_under, final = self._strands
        seen: Dict[Tuple[int, int], int] = {}
        out = []
        for ov, un in over_under:
            key = (ov, final[un])
            seen[key] = seen.get(key, 0) + 1
            out.append((key[0], key[1], seen[key]))
        return out

    def name_of_label(self, label) -> str:
        label = tuple(label)
        for name, lab in zip(self.crossing_names, self.labels):
            if lab == label:
                return name
        raise BraidError(f"no crossing labelled {label}")

    def label_of_name(self, name: str):
        return self.labels[self.crossing_names.index(name)]

    def proper(self, name: str) -> bool:
        """Both strands at the crossing belong to the same link component."""
        over_under, _ = self._strands
        ov, un = over_under[self.crossing_names.index(name)]
        comp = components(self.permutation())
        return any(ov in c and un in c for c in comp)

    def torus_name(self, m: int, n: int) -> str:
        """Name of b_{m,n}: the m-th crossing from the top in the n-th period."""
        return f"b{torus_position(m, n, self.q)}"


def torus_position(m: int, n: int, q: int) -> int:
    return (n - 1) * (q - 1) + m


def underlying_permutation(b: Braid) -> Tuple[int, ...]:
    return b.permutation()


def components(sigma: Sequence[int]) -> List[List[int]]:
    """Cycles of sigma, each listed from its smallest element following sigma."""
    q = len(sigma)
    seen = set()
    out = []
    for s in range(1, q + 1):
        if s in seen:
            continue
        cyc = []
        x = s
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = sigma[x - 1]
        out.append(cyc)
    return out


# ---------------------------------------------------------------------------
# admissible sequences

def is_admissible(seq: Sequence[int], n: Optional[int] = None) -> bool:
    """Between two equal entries there is a strictly larger entry."""
    if n is not None and any(not 1 <= s <= n - 1 for s in seq):
        return False
    for i, s in enumerate(seq):
        top = 0
        for x in seq[i + 1:]:
            if x == s and top <= s:
                return False
            top = max(top, x)
            if top > s:
                break
    return True


def count_D(n: int) -> int:
    c = 1
    for _ in range(n - 1):
        c = c * c + c
    return c


def _materialize_D(n: int) -> List[Tuple[int, ...]]:
    level = [()]
    for k in range(1, n):
        level = level + [l + (k,) + r for l in level for r in level]
    return level


def enumerate_D(n: int, cap: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Stream D_n; raise OverflowError once more than ``cap`` sequences are produced."""
    if n < 1:
        raise BraidError("n must be at least 1")
    prev = _materialize_D(n - 1) if n > 1 else []
    count = 0

    def emit(seq):
        nonlocal count
        count += 1
        if cap is not None and count > cap:
            raise OverflowError(f"D_{n} has more than {cap} elements")
        return seq

    if n == 1:
        yield emit(())
        return
    for s in prev:
        yield emit(s)
    top = (n - 1,)
    for left in prev:
        for right in prev:
            yield emit(left + top + right)


def brute_force_D(n: int, max_len: int) -> List[Tuple[int, ...]]:
    """All admissible sequences over {1..n-1} of length <= max_len (test oracle)."""
    out = []
    for length in range(max_len + 1):
        for seq in itertools.product(range(1, n), repeat=length):
            if is_admissible(seq):
                out.append(seq)
    return out


# ---------------------------------------------------------------------------
# path polynomials

def _guard(p, guard):
    if guard is not None and isinstance(p, Poly) and len(p) > guard:
        raise SizeGuardExceeded(f"polynomial exceeds {guard} monomials")
    return p


def _path_dp(b: Braid, start: int, one, weight: Callable[[int], object], add, mul, zero):
    state = {pos: zero for pos in range(1, b.q + 1)}
    state[start] = one
    for k, m in enumerate(b.word):
        top, bot = state[m], state[m + 1]
        state[m + 1] = top
        state[m] = add(mul(top, weight(k)), bot)
    return state


def path_matrix_B(b: Braid) -> Dict[Tuple[int, int], Poly]:
    names = b.crossing_names
    gens = [Poly.gen(Z2, x) for x in names]
    out = {}
    for i in range(1, b.q + 1):
        st = _path_dp(b, i, Poly.one(Z2), lambda k: gens[k], lambda x, y: x + y,
                      lambda x, y: x * y, Poly.zero(Z2))
        for j in range(1, b.q + 1):
            out[(i, j)] = st[j]
    return out


def path_poly_B(b: Braid, i: int, j: int) -> Poly:
    _check_ij(b, i, j)
    return _cache(b, "B")[(i, j)]


def path_paths_B(b: Braid, i: int, j: int) -> List[Tuple[str, ...]]:
    """Explicit enumeration of turn words (oracle for the DP)."""
    out = []
    names = b.crossing_names

    def walk(k, pos, acc):
        if k == len(b.word):
            if pos == j:
                out.append(tuple(acc))
            return
        m = b.word[k]
        if pos == m:
            walk(k + 1, m + 1, acc)
            walk(k + 1, m, acc + [names[k]])
        elif pos == m + 1:
            walk(k + 1, m, acc)
        else:
            walk(k + 1, pos, acc)

    walk(0, i, [])
    return out


def _check_ij(b, i, j):
    if not (1 <= i <= b.q and 1 <= j <= b.q):
        raise BraidError(f"indices ({i},{j}) out of range for {b.q} strands")


class _Tables:
    """W_k(x, y): sum over admissible middle sequences with entries <= k.
    E_k(x, j): same but the sequence followed by j must stay admissible.

    Entries are memoized and built on demand, so only what a query needs
    gets computed.
    """

    def __init__(self, q, B, add, mul, zero, guard=None):
        self.q = q
        self.B = dict(B)
        self._add, self._zero, self._guard = add, zero, guard
        self._mul = mul if guard is None else self._bounded(mul, guard)
        self._w = {}
        self._e = {}

    @staticmethod
    def _bounded(mul, guard):
        # refuse products whose term-by-term work alone exceeds the guard
        def go(a, b):
            if isinstance(a, Poly) and len(a) * len(b) > guard:
                raise SizeGuardExceeded(f"product of {len(a)} and {len(b)} monomials "
                                        f"exceeds the guard {guard}")
            return mul(a, b)
        return go

    def Wk(self, k, x, y):
        if k == 0:
            return self.B[(x, y)]
        key = (k, x, y)
        hit = self._w.get(key)
        if hit is None:
            hit = _guard(self._add(self.Wk(k - 1, x, y),
                                   self._mul(self.Wk(k - 1, x, k), self.Wk(k - 1, k, y))),
                         self._guard)
            self._w[key] = hit
        return hit

    def Ek(self, k, x, j):
        if k == 0 or j > k:
            return self._zero
        if j == k:
            return self.Wk(k - 1, x, k)
        key = (k, x, j)
        hit = self._e.get(key)
        if hit is None:
            hit = _guard(self._add(self.Ek(k - 1, x, j),
                                   self._mul(self.Wk(k - 1, x, k), self.Ek(k - 1, k, j))),
                         self._guard)
            self._e[key] = hit
        return hit

    def w(self, k):
        """Whole level k of W as a dict."""
        return {(x, y): self.Wk(k, x, y) for x in range(1, self.q + 1)
                for y in range(1, self.q + 1)}

    def C(self, i, j):
        if i == j:
            return self.Wk(i - 1, i, i)
        if i > j:
            return self.Ek(i - 1, i, j)
        raise BraidError("C_{i,j} needs i > j or i = j")

    def M(self, i, j):
        return self.Wk(min(i, j) - 1, i, j)


def _cache(b: Braid, key, guard=DEFAULT_GUARD):
    store = b.__dict__.setdefault("_poly_cache", {})
    if key not in store:
        if key == "B":
            store[key] = path_matrix_B(b)
        elif key == "T":
            store[key] = _Tables(b.q, _cache(b, "B"), lambda x, y: x + y, lambda x, y: x * y,
                                 Poly.zero(Z2), guard)
    return store[key]


def path_poly_C(b: Braid, i: int, j: int, method: str = "recurrence", guard=DEFAULT_GUARD) -> Poly:
    _check_ij(b, i, j)
    if not (i > j or i == j):
        raise BraidError("C_{i,j} needs i > j or i = j")
    if method == "enumerate":
        if i == j:
            seqs = enumerate_D(i)
        else:
            seqs = (s for s in enumerate_D(i) if is_admissible(s + (j,)))
        return _sum_over(b, i, j, seqs, guard)
    return _cache(b, "T", guard).C(i, j)


def path_poly_M(b: Braid, i: int, j: int, method: str = "recurrence", guard=DEFAULT_GUARD) -> Poly:
    _check_ij(b, i, j)
    if method == "enumerate":
        return _sum_over(b, i, j, enumerate_D(min(i, j)), guard)
    return _cache(b, "T", guard).M(i, j)


def _sum_over(b, i, j, seqs, guard):
    B = _cache(b, "B")
    total = Poly.zero(Z2)
    for s in seqs:
        chain = (i,) + tuple(s) + (j,)
        prod = Poly.one(Z2)
        for x, y in zip(chain, chain[1:]):
            prod = prod * B[(x, y)]
            if not prod:
                break
        total = _guard(total + prod, guard)
    return total


def closure_dga(b: Braid, guard=DEFAULT_GUARD, method: str = "recurrence") -> DGA:
    gens = {a: 1 for a in b.arc_names}
    gens.update({x: 0 for x in b.crossing_names})
    diff = {f"a{m}": Poly.one(Z2) + path_poly_C(b, m, m, method, guard) for m in range(1, b.q + 1)}
    return DGA(Z2, gens, diff, maslov=0, name=str(b))


def closure_invariants(b: Braid) -> dict:
    return {"tb": len(b.word) - b.q, "r": 0}


def closure_diagram(b: Braid) -> Diagram:
    """Lagrangian diagram of the closure: the braid followed by q nested
    arcs, arc m carrying a crossing a_m with a small loop on top."""
    return build_diagram(closure_spec(b))


def closure_spec(b: Braid) -> dict:
    q, word = b.q, b.word
    used = set(word)
    if q >= 2 and any(m not in used for m in range(1, q)):
        raise BraidError("split closure: some generator never occurs, the diagram is disconnected")
    # slots: 0=NE 1=NW 2=SW 3=SE
    crossings = []
    arcs = []
    last = {}   # position -> outgoing half-edge waiting for a partner
    first = {}  # position -> first incoming half-edge
    names = b.crossing_names
    for name, m in zip(names, word):
        crossings.append({"id": name, "slots": [f"{name}.{k}" for k in range(4)], "over": [1, 3]})
        for pos, slot in ((m, 1), (m + 1, 2)):
            h = f"{name}.{slot}"
            if pos in last:
                arcs.append([last[pos], h])
            else:
                first[pos] = h
        last[m] = f"{name}.0"
        last[m + 1] = f"{name}.3"
    for j in range(1, q + 1):
        a = f"a{j}"
        crossings.append({"id": a, "slots": [f"{a}.{k}" for k in range(4)], "over": [0, 2]})
        if j in last:
            arcs.append([last[j], f"{a}.3"])
            arcs.append([f"{a}.2", first[j]])
        else:
            arcs.append([f"{a}.2", f"{a}.3"])
        arcs.append([f"{a}.1", f"{a}.0"])
    order = b.arc_names + names
    crossings.sort(key=lambda c: order.index(c["id"]))
    if word:
        outer = [names[0], 2] if word[0] == q - 1 else None
        if outer is None:
            # the bottom strand's first crossing: the region below it is unbounded
            k = next(i for i, m in enumerate(word) if m == q - 1)
            outer = [names[k], 2]
    else:
        outer = ["a1", 1]
    gradings = {a: 1 for a in b.arc_names}
    gradings.update({x: 0 for x in names})
    return {"crossings": crossings, "arcs": arcs, "orientation": "arcs", "outer": outer,
            "gradings": gradings, "maslov": 0, "rotation": 0}


def random_braid(rng, max_q=5, max_len=8, min_q=1) -> Braid:
    q = rng.randint(min_q, max_q)
    if q == 1:
        return Braid(1, [])
    n = rng.randint(0, max_len)
    return Braid(q, [rng.randint(1, q - 1) for _ in range(n)])


def is_pure(b: Braid) -> bool:
    return b.permutation() == tuple(range(1, b.q + 1))


def knot_or_link(p: int, q: int) -> int:
    return gcd(p, q)
