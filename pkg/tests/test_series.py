"""Linear-representation arithmetic checked against explicit polynomials."""

import itertools

from hypothesis import given

from contactdga.algebra import Z2, P, Poly
from contactdga.series import Series

from strategies import LETTERS, polys


def words(max_len):
    for n in range(max_len + 1):
        yield from itertools.product(LETTERS, repeat=n)


@given(polys())
def test_from_poly_coefficients(p):
    s = Series.from_poly(p)
    for w in words(3):
        assert s.coefficient(w) == p.coefficient(w)
    assert s.to_poly(3) == p


@given(polys(), polys())
def test_sum_and_product_match_polys(a, b):
    sa, sb = Series.from_poly(a), Series.from_poly(b)
    assert (sa + sb) == (a + b)
    assert (sa * sb) == (a * b)
    assert (sa * sb).to_poly(6) == a * b


@given(polys(), polys())
def test_equality_is_exact(a, b):
    assert (Series.from_poly(a) == Series.from_poly(b)) == (a == b)


@given(polys())
def test_minimal_dimension_bounded_by_trie(p):
    s = Series.from_poly(p)
    nodes = {w[:k] for _, w, _ in p.terms() for k in range(len(w) + 1)}
    assert s.n <= max(len(nodes), 0) + 1
    assert s.is_zero() == p.is_zero()


def test_generators_and_constants():
    x, y = Series.gen("x"), Series.gen("y")
    assert x * y + y * x == P(Z2, "x y + y x")
    assert Series.const(1) + Series.const(1) == Poly.zero(Z2)
    assert (Series.const(1) * x) == P(Z2, "x")


def test_large_power_stays_small():
    # (x + y)^30 has 2^30 monomials but a small representation
    s = Series.const(1)
    xy = Series.gen("x") + Series.gen("y")
    for _ in range(30):
        s = s * xy
    assert s.n <= 31
    assert s.coefficient(("x",) * 30) == 1
    assert s.coefficient(("x",) * 29) == 0
