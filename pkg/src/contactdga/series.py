"""Noncommutative Z/2 polynomials as linear representations.

A series f over an alphabet is stored as (alpha, {mu_a}, beta) with
f(w) = alpha . mu_{w1} ... mu_{wn} . beta over GF(2).  Sums and products
are block constructions; ``minimize`` reduces to the rank of the Hankel
matrix, so equality is decided exactly without ever listing monomials.
Polynomials with astronomically many terms (path polynomials of larger
torus braids) stay small in this form.

Vectors are Python ints used as bitsets; a matrix is a list of row bitsets.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, List, Optional

from .algebra import Poly, Z2


def _vecmat(v: int, rows: List[int]) -> int:
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= rows[i]
        v >>= 1
        i += 1
    return out


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


class _Echelon:
    """Incremental GF(2) basis; remembers each reduced vector's expression
    in terms of the inserted vectors."""

    def __init__(self):
        self.piv: Dict[int, tuple] = {}
        self.count = 0

    def reduce(self, u: int):
        c = 0
        while u:
            p = u.bit_length() - 1
            hit = self.piv.get(p)
            if hit is None:
                break
            u ^= hit[0]
            c ^= hit[1]
        return u, c

    def insert(self, u: int) -> Optional[int]:
        """Add u if independent; returns its index or None."""
        r, c = self.reduce(u)
        if not r:
            return None
        idx = self.count
        self.count += 1
        self.piv[r.bit_length() - 1] = (r, c ^ (1 << idx))
        return idx

    def coords(self, u: int) -> int:
        r, c = self.reduce(u)
        if r:
            raise ArithmeticError("vector outside the span")
        return c


class Series:
    __slots__ = ("n", "alpha", "mats", "beta")

    def __init__(self, n: int, alpha: int, mats: Dict[str, List[int]], beta: int):
        self.n = n
        self.alpha = alpha
        self.mats = mats
        self.beta = beta

    # constructors
    @classmethod
    def zero(cls):
        return cls(0, 0, {}, 0)

    @classmethod
    def const(cls, c: int = 1):
        return cls(1, 1, {}, c & 1) if c & 1 else cls.zero()

    @classmethod
    def gen(cls, name: str):
        return cls(2, 1, {name: [0b10, 0]}, 0b10)

    @classmethod
    def from_poly(cls, p: Poly) -> "Series":
        """Trie automaton of the words of p, then minimized."""
        if p.ring != Z2:
            p = p.to_z2()
        states = {(): 0}
        edges = []
        final = 0
        for _, w, _ in p.terms():
            cur = ()
            for x in w:
                nxt = cur + (x,)
                if nxt not in states:
                    states[nxt] = len(states)
                    edges.append((states[cur], x, states[nxt]))
                cur = nxt
            final |= 1 << states[cur]
        n = len(states)
        mats: Dict[str, List[int]] = {}
        for i, x, j in edges:
            mats.setdefault(x, [0] * n)[i] |= 1 << j
        return cls(n, 1, mats, final).minimize()

    # evaluation
    def coefficient(self, word: Iterable[str]) -> int:
        v = self.alpha
        for x in word:
            m = self.mats.get(x)
            if m is None:
                return 0
            v = _vecmat(v, m)
            if not v:
                return 0
        return _parity(v & self.beta)

    @property
    def letters(self):
        return set(self.mats)

    def _mat(self, x):
        return self.mats.get(x) or [0] * self.n

    # arithmetic
    def __add__(self, other: "Series") -> "Series":
        n1 = self.n
        n = n1 + other.n
        mats = {}
        for x in self.letters | other.letters:
            a, b = self._mat(x), other._mat(x)
            mats[x] = a + [r << n1 for r in b]
        return Series(n, self.alpha | (other.alpha << n1), mats,
                      self.beta | (other.beta << n1)).minimize()

    __sub__ = __add__

    def __mul__(self, other: "Series") -> "Series":
        if not self.n or not other.n:
            return Series.zero()
        n1 = self.n
        n = n1 + other.n
        gb = _parity(other.alpha & other.beta)
        mats = {}
        for x in self.letters | other.letters:
            a, b = self._mat(x), other._mat(x)
            cross = _vecmat(other.alpha, b) << n1
            rows = []
            for i in range(n1):
                r = a[i]
                if (self.beta >> i) & 1:
                    r ^= cross
                rows.append(r)
            rows += [r << n1 for r in b]
            mats[x] = rows
        beta = (self.beta if gb else 0) | (other.beta << n1)
        return Series(n, self.alpha, mats, beta).minimize()

    # reduction
    def _forward(self) -> "Series":
        """Restrict to the span of the reachable row vectors alpha.mu(w)."""
        if not self.alpha:
            return Series.zero()
        ech = _Echelon()
        basis = []
        queue = deque()
        ech.insert(self.alpha)
        basis.append(self.alpha)
        queue.append(self.alpha)
        letters = sorted(self.mats)
        while queue:
            v = queue.popleft()
            for x in letters:
                u = _vecmat(v, self.mats[x])
                if u and ech.insert(u) is not None:
                    basis.append(u)
                    queue.append(u)
        r = len(basis)
        mats = {}
        for x in letters:
            rows = [ech.coords(_vecmat(v, self.mats[x])) for v in basis]
            if any(rows):
                mats[x] = rows
        beta = 0
        for i, v in enumerate(basis):
            if _parity(v & self.beta):
                beta |= 1 << i
        return Series(r, 1, mats, beta)

    def transpose(self) -> "Series":
        """Representation of the mirror series w -> f(reversed w)."""
        n = self.n
        mats = {}
        for x, rows in self.mats.items():
            cols = [0] * n
            for i, r in enumerate(rows):
                j = 0
                while r:
                    if r & 1:
                        cols[j] |= 1 << i
                    r >>= 1
                    j += 1
            mats[x] = cols
        return Series(n, self.beta, mats, self.alpha)

    def minimize(self) -> "Series":
        s = self._forward().transpose()._forward().transpose()
        if not s.beta:
            return Series.zero()
        return s

    def is_zero(self) -> bool:
        return self.minimize().n == 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = Series.from_poly(other)
        if not isinstance(other, Series):
            return NotImplemented
        return (self + other).n == 0

    def __hash__(self):
        raise TypeError("Series is unhashable")

    def __repr__(self):
        return f"Series(dim={self.n}, letters={len(self.mats)})"

    def to_poly(self, max_len: int) -> Poly:
        """Expand all words up to max_len (only for small series)."""
        acc = {}
        frontier = [((), self.alpha)]
        for depth in range(max_len + 1):
            nxt = []
            for w, v in frontier:
                if _parity(v & self.beta):
                    acc[(0, w)] = 1
                if depth < max_len:
                    for x in sorted(self.mats):
                        u = _vecmat(v, self.mats[x])
                        if u:
                            nxt.append((w + (x,), u))
            frontier = nxt
        return Poly(Z2, acc)
