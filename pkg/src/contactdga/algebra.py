"""Noncommutative polynomials, semi-free DGAs, algebra maps and derivations.

Coefficients live either in Z2 or in the Laurent ring Z[t, t^-1].  A
polynomial is a finite map from ``(t_exponent, word)`` to a nonzero
integer coefficient, where a word is a tuple of generator names.  Over Z2
the t-exponent is always 0 and every stored coefficient is 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

Z2 = "Z2"
LAURENT = "LaurentZ"
RINGS = (Z2, LAURENT)

Word = Tuple[str, ...]
Key = Tuple[int, Word]


class AlgebraError(ValueError):
    pass


class CoefficientMismatch(AlgebraError):
    pass


class SizeGuardExceeded(OverflowError):
    pass


def _check_ring(ring):
    if ring not in RINGS:
        raise AlgebraError(f"unknown coefficient ring {ring!r}")
    return ring


class Poly:
    """Immutable noncommutative polynomial in canonical form."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: str, terms: Optional[Mapping[Key, int]] = None):
        self.ring = _check_ring(ring)
        clean: Dict[Key, int] = {}
        if terms:
            if ring == Z2:
                for (_, word), c in terms.items():
                    if c % 2:
                        w = tuple(word)
                        if w in clean:
                            del clean[w]
                        else:
                            clean[w] = 1
                clean = {(0, w): 1 for w in clean}
            else:
                for (e, word), c in terms.items():
                    if c:
                        k = (int(e), tuple(word))
                        v = clean.get(k, 0) + c
                        if v:
                            clean[k] = v
                        else:
                            clean.pop(k, None)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, ring, terms):
        # terms already reduced; ordering is applied lazily when listing
        p = object.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, ring):
        return cls(ring)

    @classmethod
    def one(cls, ring):
        return cls(ring, {(0, ()): 1})

    @classmethod
    def const(cls, ring, c: int = 1, texp: int = 0):
        return cls(ring, {(texp, ()): c})

    @classmethod
    def gen(cls, ring, name: str):
        return cls(ring, {(0, (name,)): 1})

    @classmethod
    def word(cls, ring, names: Iterable[str], coeff: int = 1, texp: int = 0):
        return cls(ring, {(texp, tuple(names)): coeff})

    @classmethod
    def parse(cls, ring, text: str):
        return parse_poly(ring, text)

    # basic queries
    def terms(self) -> Iterator[Tuple[int, Word, int]]:
        for (e, w), c in sorted(self._terms.items()):
            yield e, w, c

    def items(self):
        return sorted(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0, ()), 0)

    def generators(self) -> set:
        out = set()
        for (_, w) in self._terms:
            out.update(w)
        return out

    def coefficient(self, word, texp: int = 0) -> int:
        return self._terms.get((texp, tuple(word)), 0)

    def max_degree(self) -> int:
        return max((len(w) for (_, w) in self._terms), default=0)

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise CoefficientMismatch(f"cannot combine {self.ring} with {other.ring}")
            return other
        if isinstance(other, int):
            return Poly.const(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.ring == Z2:
            acc = dict(self._terms)
            for k in other._terms:
                if k in acc:
                    del acc[k]
                else:
                    acc[k] = 1
            return Poly._raw(Z2, acc)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            v = acc.get(k, 0) + c
            if v:
                acc[k] = v
            else:
                acc.pop(k, None)
        return Poly._raw(LAURENT, acc)

    __radd__ = __add__

    def __neg__(self):
        if self.ring == Z2:
            return self
        return Poly._raw(LAURENT, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: int, texp: int = 0) -> "Poly":
        """Multiply by the central scalar ``c * t**texp``."""
        if self.ring == Z2:
            return self if c % 2 else Poly.zero(Z2)
        if not c:
            return Poly.zero(LAURENT)
        return Poly._raw(LAURENT, {(e + texp, w): v * c for (e, w), v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return Poly.zero(self.ring)
        acc: Dict[Key, int] = {}
        if self.ring == Z2:
            for (_, w1) in self._terms:
                for (_, w2) in other._terms:
                    k = (0, w1 + w2)
                    if k in acc:
                        del acc[k]
                    else:
                        acc[k] = 1
            return Poly._raw(Z2, acc)
        for (e1, w1), c1 in self._terms.items():
            for (e2, w2), c2 in other._terms.items():
                k = (e1 + e2, w1 + w2)
                v = acc.get(k, 0) + c1 * c2
                if v:
                    acc[k] = v
                else:
                    acc.pop(k, None)
        return Poly._raw(LAURENT, acc)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.ring, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # conversions
    def reduce_mod2(self) -> "Poly":
        """Set t = 1 and reduce coefficients modulo 2."""
        return self.to_z2()

    def to_z2(self) -> "Poly":
        if self.ring == Z2:
            return self
        acc: Dict[Word, int] = {}
        for (_, w), c in self._terms.items():
            acc[w] = acc.get(w, 0) + c
        return Poly(Z2, {(0, w): c for w, c in acc.items()})

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        return Poly(self.ring, {(e, tuple(mapping.get(x, x) for x in w)): c
                                for (e, w), c in self._terms.items()})

    def to_json(self) -> list:
        if self.ring == Z2:
            return [[1, list(w)] for (_, w) in sorted(self._terms)]
        return [[e, c, list(w)] for (e, w), c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, ring, data) -> "Poly":
        terms: Dict[Key, int] = {}
        for item in data:
            if ring == Z2:
                c, names = item
                k = (0, tuple(names))
            else:
                e, c, names = item
                k = (int(e), tuple(names))
            terms[k] = terms.get(k, 0) + int(c)
        return cls(ring, terms)

    def __repr__(self):
        return f"Poly({self.ring}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (e, w), c in sorted(self._terms.items()):
            factors = []
            if e == 1:
                factors.append("t")
            elif e:
                factors.append(f"t^{e}")
            factors.extend(w)
            mag = abs(c)
            body = "*".join(factors)
            if not body:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}*{body}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<t>t(?:\^\{?(?P<texp>-?\d+)\}?)?(?![A-Za-z0-9_']))"
                    r"|(?P<name>[A-Za-z_][A-Za-z0-9_',]*)|(?P<op>[-+*()]))")


def parse_poly(ring: str, text: str) -> Poly:
    """Parse strings such as ``"1 - b1 - t*b1*b2*b3 + t^-1"``.

    Juxtaposition and ``*`` both denote the (noncommutative) product.  The
    bare symbol ``t`` is the Laurent variable; any other identifier is a
    generator name.
    """
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise AlgebraError(f"cannot parse polynomial near {text[pos:]!r}")
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", int(m.group("num"))))
        elif m.group("t"):
            tokens.append(("t", int(m.group("texp") or 1)))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else (None, None)

    def parse_sum():
        nonlocal idx
        sign = 1
        total = Poly.zero(ring)
        kind, val = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            idx += 1
        while True:
            term = parse_product()
            total = total + term.scale(sign)
            kind, val = peek()
            if kind == "op" and val in "+-":
                sign = -1 if val == "-" else 1
                idx += 1
            else:
                return total

    def parse_product():
        nonlocal idx
        acc = Poly.one(ring)
        seen = False
        while True:
            kind, val = peek()
            if kind == "op" and val == "*":
                idx += 1
                continue
            if kind == "num":
                acc = acc.scale(val)
            elif kind == "t":
                acc = acc.scale(1, val if ring == LAURENT else 0)
            elif kind == "name":
                acc = acc * Poly.gen(ring, val)
            elif kind == "op" and val == "(":
                idx += 1
                inner = parse_sum()
                if peek() != ("op", ")"):
                    raise AlgebraError("unbalanced parenthesis")
                acc = acc * inner
            else:
                if not seen:
                    raise AlgebraError(f"empty term in {text!r}")
                return acc
            idx += 1
            seen = True

    result = parse_sum()
    if idx != len(tokens):
        raise AlgebraError(f"trailing input in {text!r}")
    return result


def P(ring, text):
    """Shorthand for :func:`parse_poly`."""
    return parse_poly(ring, text)


poly_mul = Poly.__mul__


@dataclass
class Report:
    """Outcome of a verification; truthy when every check passed."""

    name: str
    ok: bool = True
    failures: List[Tuple[str, str]] = field(default_factory=list)
    checked: int = 0

    def fail(self, item, detail=""):
        self.ok = False
        self.failures.append((str(item), str(detail)))

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"check": self.name, "ok": self.ok, "checked": self.checked,
                "failures": [{"item": a, "detail": b} for a, b in self.failures]}


class DGA:
    """Semi-free DGA: graded generators, coefficient ring, differential.

    ``maslov`` is the even integer |t|; gradings are compared modulo it
    when it is nonzero.
    """

    def __init__(self, ring: str, generators: Mapping[str, int], diff: Mapping[str, Poly],
                 maslov: int = 0, name: str = ""):
        self.ring = _check_ring(ring)
        if maslov % 2:
            raise AlgebraError("the Maslov number must be even")
        self.maslov = int(maslov)
        self.generators: Dict[str, int] = {str(g): int(i) for g, i in generators.items()}
        self.name = name
        d = {}
        for g in self.generators:
            p = diff.get(g, Poly.zero(ring))
            if p.ring != ring:
                raise CoefficientMismatch(f"differential of {g} has ring {p.ring}")
            unknown = p.generators() - self.generators.keys()
            if unknown:
                raise AlgebraError(f"differential of {g} uses unknown generators {sorted(unknown)}")
            d[g] = p
        extra = set(diff) - self.generators.keys()
        if extra:
            raise AlgebraError(f"differential given for unknown generators {sorted(extra)}")
        self.diff: Dict[str, Poly] = d

    def __repr__(self):
        return f"DGA({self.name or '?'}, {self.ring}, {len(self.generators)} generators)"

    def index(self, name: str) -> int:
        try:
            return self.generators[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def word_index(self, word: Word, texp: int = 0) -> int:
        return sum(self.index(x) for x in word) + texp * self.maslov

    def reduce_index(self, i: int) -> int:
        return i % self.maslov if self.maslov else i

    def same_index(self, i: int, j: int) -> bool:
        return self.reduce_index(i) == self.reduce_index(j)

    def poly_index(self, p: Poly) -> Optional[int]:
        """Common index of all terms (reduced mod maslov); None for 0."""
        idx = None
        for e, w, _ in p.terms():
            i = self.reduce_index(self.word_index(w, e))
            if idx is None:
                idx = i
            elif idx != i:
                raise AlgebraError(f"polynomial {p} has mixed index")
        return idx

    def is_pure(self, p: Poly) -> bool:
        try:
            self.poly_index(p)
            return True
        except AlgebraError:
            return False

    def d(self, p: Poly) -> Poly:
        return extend_diff(self, p)

    def gen(self, name: str) -> Poly:
        self.index(name)
        return Poly.gen(self.ring, name)

    def P(self, text: str) -> Poly:
        p = parse_poly(self.ring, text)
        unknown = p.generators() - self.generators.keys()
        if unknown:
            raise AlgebraError(f"unknown generators {sorted(unknown)}")
        return p

    def reduce_mod2(self) -> "DGA":
        return DGA(Z2, self.generators, {g: p.to_z2() for g, p in self.diff.items()},
                   maslov=self.maslov, name=self.name)

    def renamed(self, mapping: Mapping[str, str], name: str = "") -> "DGA":
        gens = {mapping.get(g, g): i for g, i in self.generators.items()}
        diff = {mapping.get(g, g): p.rename(mapping) for g, p in self.diff.items()}
        return DGA(self.ring, gens, diff, self.maslov, name or self.name)

    def to_json(self) -> dict:
        return {"ring": self.ring, "maslov": self.maslov,
                "generators": [{"name": g, "index": i} for g, i in self.generators.items()],
                "differential": {g: self.diff[g].to_json() for g in self.generators}}

    @classmethod
    def from_json(cls, data) -> "DGA":
        ring = data["ring"]
        gens = {g["name"]: g["index"] for g in data["generators"]}
        diff = {g: Poly.from_json(ring, v) for g, v in data.get("differential", {}).items()}
        return cls(ring, gens, diff, data.get("maslov", 0))


def _sign(i: int) -> int:
    return -1 if i % 2 else 1


def extend_diff(dga: DGA, p: Poly) -> Poly:
    """Signed Leibniz extension of the differential to a polynomial."""
    if p.ring != dga.ring:
        raise CoefficientMismatch(f"polynomial over {p.ring}, DGA over {dga.ring}")
    ring = dga.ring
    acc = Poly.zero(ring)
    for e, w, c in p.terms():
        prefix_index = 0
        for k, x in enumerate(w):
            dx = dga.diff.get(x)
            if dx is None:
                raise AlgebraError(f"unknown generator {x!r}")
            if dx:
                left = Poly.word(ring, w[:k])
                right = Poly.word(ring, w[k + 1:])
                acc = acc + (left * dx * right).scale(c * _sign(prefix_index), e)
            prefix_index += dga.index(x)
    return acc


class ChainMap:
    """Algebra morphism determined by images of generators."""

    def __init__(self, source: DGA, target: DGA, assignment: Mapping[str, Poly], name: str = ""):
        if source.ring != target.ring:
            raise CoefficientMismatch("source and target DGAs have different rings")
        self.source = source
        self.target = target
        self.name = name
        self.assignment: Dict[str, Poly] = {}
        for g in source.generators:
            img = assignment.get(g)
            if img is None:
                img = Poly.gen(source.ring, g) if g in target.generators else None
                if img is None:
                    raise AlgebraError(f"no image given for generator {g!r}")
            if img.ring != source.ring:
                raise CoefficientMismatch(f"image of {g} has ring {img.ring}")
            unknown = img.generators() - target.generators.keys()
            if unknown:
                raise AlgebraError(f"image of {g} uses unknown generators {sorted(unknown)}")
            self.assignment[g] = img
        extra = set(assignment) - source.generators.keys()
        if extra:
            raise AlgebraError(f"images given for unknown generators {sorted(extra)}")

    def __call__(self, p: Poly) -> Poly:
        return extend_hom(self, p)

    def __getitem__(self, g):
        return self.assignment[g]

    def index_errors(self) -> List[str]:
        bad = []
        for g, img in self.assignment.items():
            try:
                i = self.target.poly_index(img)
            except AlgebraError:
                bad.append(g)
                continue
            if i is not None and not self.target.same_index(i, self.source.index(g)):
                bad.append(g)
        return bad

    def then(self, other: "ChainMap", name: str = "") -> "ChainMap":
        """Composite ``other o self`` (apply self first)."""
        return ChainMap(self.source, other.target,
                        {g: other(img) for g, img in self.assignment.items()},
                        name or f"{other.name}.{self.name}")

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.assignment == other.assignment

    def to_json(self):
        return {g: p.to_json() for g, p in self.assignment.items()}

    @classmethod
    def identity(cls, dga: DGA) -> "ChainMap":
        return cls(dga, dga, {}, "id")


def extend_hom(m: ChainMap, p: Poly, guard: Optional[int] = None) -> Poly:
    """Multiplicative, coefficient-linear extension of a generator map."""
    if p.ring != m.source.ring:
        raise CoefficientMismatch("polynomial and map have different rings")
    ring = p.ring
    acc: Dict[Key, int] = {}
    cache: Dict[Word, Poly] = {(): Poly.one(ring)}

    def image(word: Word) -> Poly:
        hit = cache.get(word)
        if hit is not None:
            return hit
        # reuse the longest cached prefix
        head = image(word[:-1])
        x = word[-1]
        if x not in m.assignment:
            raise AlgebraError(f"unknown generator {x!r}")
        res = head * m.assignment[x]
        cache[word] = res
        return res

    z2 = ring == Z2
    for (e, w), c in p._terms.items():
        img = image(w)
        for (e2, w2), c2 in img._terms.items():
            k = (e + e2, w2)
            if z2:
                if k in acc:
                    del acc[k]
                else:
                    acc[k] = 1
            else:
                v = acc.get(k, 0) + c * c2
                if v:
                    acc[k] = v
                else:
                    acc.pop(k, None)
        if guard is not None and len(acc) > guard:
            raise SizeGuardExceeded(f"image exceeds {guard} monomials")
    return Poly._raw(ring, acc)


class Derivation:
    """(phi, psi)-derivation of index +1 given on generators.

    Extension rule: K(xy) = K(x) psi(y) + (-1)^{|x|} phi(x) K(y).
    """

    def __init__(self, left: ChainMap, right: ChainMap, assignment: Mapping[str, Poly], name=""):
        if left.source is not right.source and left.source.generators != right.source.generators:
            raise AlgebraError("phi and psi must share a source")
        self.left = left
        self.right = right
        self.source = left.source
        self.target = left.target
        self.name = name
        ring = self.source.ring
        self.assignment = {g: assignment.get(g, Poly.zero(ring)) for g in self.source.generators}
        extra = set(assignment) - self.source.generators.keys()
        if extra:
            raise AlgebraError(f"values given for unknown generators {sorted(extra)}")

    def __call__(self, p: Poly) -> Poly:
        return extend_derivation(self, p)

    def index_errors(self) -> List[str]:
        bad = []
        for g, img in self.assignment.items():
            try:
                i = self.target.poly_index(img)
            except AlgebraError:
                bad.append(g)
                continue
            if i is not None and not self.target.same_index(i, self.source.index(g) + 1):
                bad.append(g)
        return bad


def extend_derivation(k: Derivation, p: Poly) -> Poly:
    ring = p.ring
    src = k.source
    out = Poly.zero(ring)
    phi, psi = k.left.assignment, k.right.assignment
    for e, w, c in p.terms():
        n = len(w)
        if not any(k.assignment.get(x) for x in w):
            for x in w:
                if x not in src.generators:
                    raise AlgebraError(f"unknown generator {x!r}")
            continue
        # suffix images under psi
        suffix = [Poly.one(ring)] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = psi[w[i]] * suffix[i + 1]
        prefix = Poly.one(ring)
        prefix_index = 0
        for i, x in enumerate(w):
            kx = k.assignment[x]
            if kx:
                out = out + (prefix * kx * suffix[i + 1]).scale(c * _sign(prefix_index), e)
            prefix = prefix * phi[x]
            prefix_index += src.index(x)
    return out


def check_d_squared(dga: DGA) -> Report:
    rep = Report("d_squared")
    for g, dg in dga.diff.items():
        rep.checked += 1
        dd = extend_diff(dga, dg)
        if dd:
            rep.fail(g, f"d(d({g})) = {dd}")
    return rep


def check_differential_index(dga: DGA) -> Report:
    """Each differential must be pure of index |g| - 1."""
    rep = Report("differential_index")
    for g, dg in dga.diff.items():
        rep.checked += 1
        try:
            i = dga.poly_index(dg)
        except AlgebraError:
            rep.fail(g, "mixed index")
            continue
        if i is not None and not dga.same_index(i, dga.index(g) - 1):
            rep.fail(g, f"index {i}, expected {dga.index(g) - 1}")
    return rep


def check_chain_map(m: ChainMap) -> Report:
    rep = Report(f"chain_map {m.name}".strip())
    for g in m.source.generators:
        rep.checked += 1
        lhs = m(m.source.diff[g])
        rhs = extend_diff(m.target, m.assignment[g])
        if lhs != rhs:
            rep.fail(g, f"f(d{g}) = {lhs} but d(f{g}) = {rhs}")
    for g in m.index_errors():
        rep.fail(g, "index not preserved")
    return rep


def check_chain_homotopy(k: Derivation) -> Report:
    rep = Report(f"chain_homotopy {k.name}".strip())
    for g in k.source.generators:
        rep.checked += 1
        lhs = k(k.source.diff[g]) + extend_diff(k.target, k.assignment[g])
        rhs = k.left.assignment[g] - k.right.assignment[g]
        if lhs != rhs:
            rep.fail(g, f"(Kd + dK)({g}) = {lhs} but phi - psi = {rhs}")
    for g in k.index_errors():
        rep.fail(g, "K does not raise the index by one")
    return rep
