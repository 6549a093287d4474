import pytest
from hypothesis import given, strategies as st

from contactdga.algebra import (DGA, LAURENT, Z2, P, Poly, check_chain_map, check_d_squared)
from contactdga.reidemeister import (LOOP_EVENTS, LOOP_RELABEL, MoveError, MoveEvent, build_II,
                                     compose, contracted_dga, holonomy, holonomy_IIIb,
                                     inverse_IIIb, loop_dga, loop_holonomies,
                                     loop_monodromy_trefoil, pair_sign, relabeling,
                                     trefoil_dga, verify_homotopy_pair)

from strategies import polys


# --- the trefoil loop ---------------------------------------------------------

def test_loop_dgas_are_dgas():
    for i in range(5):
        for ring in (LAURENT, Z2):
            assert check_d_squared(loop_dga(f"D{i}", ring))


@pytest.mark.parametrize("ring", [LAURENT, Z2])
def test_loop_holonomies_are_chain_maps(ring):
    for h in loop_holonomies(ring):
        assert h.check()


def test_loop_move_images():
    h1, h2, h3, h4 = loop_holonomies()
    assert h1["a2"] == P(LAURENT, "a2 + d + t b2 b3 d")
    assert compose([h2, h3])["d"] == P(LAURENT, "d - b1 a2 + a1 c1")
    assert h4["b1"] == P(LAURENT, "-t^-1 - b3 c1")
    assert h4["d"].is_zero()


def test_trefoil_monodromy_on_index_zero():
    m = loop_monodromy_trefoil()
    assert m["b1"] == P(LAURENT, "-t^-1 - b2 b3")
    assert m["b2"] == P(LAURENT, "b1")
    assert m["b3"] == P(LAURENT, "b2")
    z = loop_monodromy_trefoil(Z2)
    assert z["b1"] == P(Z2, "1 + b2 b3")
    assert z.check() and m.check()


def test_mod2_reduction_commutes_with_holonomy():
    for hl, hz in zip(loop_holonomies(LAURENT), loop_holonomies(Z2)):
        red = hl.reduce_mod2().map.assignment
        assert red == hz.map.assignment


def test_contraction_reproduces_last_dga():
    d4 = contracted_dga(LOOP_EVENTS[3], loop_dga("D3"))
    assert d4.diff == loop_dga("D4").diff
    # and the first II move contracts D1 back to D0
    assert contracted_dga(LOOP_EVENTS[0], loop_dga("D1")).diff == loop_dga("D0").diff


def test_first_move_homotopy_pair():
    for ring in (LAURENT, Z2):
        e = LOOP_EVENTS[0] if ring == LAURENT else LOOP_EVENTS[0].reduce_mod2()
        rep = verify_homotopy_pair(e, loop_dga("D0", ring), loop_dga("D1", ring))
        assert rep, rep.failures


def test_relabel_is_isomorphism_of_end_points():
    h = relabeling(loop_dga("D4"), LOOP_RELABEL, trefoil_dga())
    assert h.check()
    with pytest.raises(MoveError):
        relabeling(loop_dga("D4"), {"a1": "b2"})


def test_event_json_roundtrip():
    for e in LOOP_EVENTS:
        assert MoveEvent.from_json(e.to_json()) == e


# --- synthetic II moves against the explicit formula ----------------------------

def _pair_dga(ring, s, v, top):
    """x, y below the pair (b, a); c1 above with d(c1) = top;
    c2 with d(c2) = c1 - a x b is only closed when top = (s b + v) x b."""
    gens = {"x": 0, "y": 0, "b": 0, "a": 1, "c1": 1, "c2": 2}
    da = Poly.gen(ring, "b").scale(s) + v
    diff = {"a": da, "c1": top, "c2": P(ring, "c1") - P(ring, "a x b")}
    return DGA(ring, gens, diff)


def _formula(ring, s, v, p):
    """K applied to p, a polynomial in x, y, b: every b in a monomial turns
    into (-s) a with the b's to its left replaced by -s v."""
    a = Poly.gen(ring, "a")
    if ring == Z2:
        bt, ka = v, a
    else:
        bt, ka = v.scale(-s), a.scale(-s)
    out = Poly.zero(ring)
    for e, w, c in p.terms():
        left = Poly.one(ring)
        for j, x in enumerate(w):
            if x == "b":
                out = out + (left * ka * Poly.word(ring, w[j + 1:])).scale(c, e)
                left = left * bt
            else:
                left = left * Poly.gen(ring, x)
    return out


ORDER = ["x", "y", "b", "a", "c1", "c2"]


@pytest.mark.parametrize("ring", [LAURENT, Z2])
@pytest.mark.parametrize("s", [1, -1])
def test_II_chain_with_dependent_generator(ring, s):
    v = P(ring, "t^-1 + x y") if ring == LAURENT else P(ring, "1 + x y")
    top = (Poly.gen(ring, "b").scale(s) + v) * P(ring, "x b")
    big = _pair_dga(ring, s if ring == LAURENT else 1, v, top)
    assert check_d_squared(big)
    e = MoveEvent("II", {"a": "a", "b": "b"}, order=ORDER)
    small = contracted_dga(e, big)
    rep = verify_homotopy_pair(e, small, big)
    assert rep, rep.failures
    phi = build_II(e, small, big).phi
    ss = s if ring == LAURENT else 1
    assert phi["c1"] == P(ring, "c1") + _formula(ring, ss, v, top)
    assert phi["c2"] == P(ring, "c2")


@given(st.sampled_from([LAURENT, Z2]), st.sampled_from([1, -1]), st.data())
def test_II_formula_random(ring, s, data):
    if ring == Z2:
        s = 1
    v = data.draw(polys(ring, ["x", "y"], max_terms=3, max_len=2))
    top = data.draw(polys(ring, ["x", "y", "b"], max_terms=4, max_len=4))
    gens = {"x": 0, "y": 0, "b": 0, "a": 1, "c1": 1}
    big = DGA(ring, gens, {"a": Poly.gen(ring, "b").scale(s) + v, "c1": top})
    e = MoveEvent("II", {"a": "a", "b": "b"}, order=ORDER[:5])
    small = contracted_dga(e, big)
    data_ = build_II(e, small, big)
    assert data_.phi["c1"] == P(ring, "c1") + _formula(ring, s, v, top)
    assert verify_homotopy_pair(e, small, big)


def test_II_errors():
    ring = LAURENT
    v = P(ring, "x")
    big = _pair_dga(ring, 1, v, (P(ring, "b + x")) * P(ring, "x b"))
    with pytest.raises(MoveError):
        build_II(MoveEvent("II", {"a": "a", "b": "b"}), contracted_dga(
            MoveEvent("II", {"a": "a", "b": "b"}), big), big)
    with pytest.raises(MoveError):
        pair_sign(big, "a", "y")          # y does not occur in d(a)
    with pytest.raises(MoveError):
        pair_sign(big, "c2", "b")
    with pytest.raises(MoveError):
        contracted_dga(MoveEvent("II", {"a": "a", "b": "b"}, relabel={"x": "y"}), big)
    with pytest.raises(MoveError):
        contracted_dga(MoveEvent("II", {"a": "a", "b": "b"}, v="y"), big)
    with pytest.raises(MoveError):
        MoveEvent("II", {"a": "a"})
    with pytest.raises(MoveError):
        MoveEvent("IV", {})


# --- IIIb inverse pairs ---------------------------------------------------------

def _triangle(ring, s):
    gens = {"a": 1, "b": 0, "c": 1, "e": 0}
    before = DGA(ring, gens, {"c": P(ring, "e")})
    after = DGA(ring, gens, {"c": P(ring, "e"), "a": P(ring, "e b").scale(s)})
    return before, after


@pytest.mark.parametrize("signs", [(1, 1, 1), (1, -1, 1), (-1, -1, -1)])
def test_IIIb_inverse_pair_is_identity(signs):
    s = signs[0] * signs[1] * signs[2]
    before, after = _triangle(LAURENT, s)
    e = MoveEvent("IIIb", {"a": "a", "b": "b", "c": "c"}, signs=signs)
    fwd = holonomy(e, before, after)
    assert fwd.check()
    opp = (-signs[0], signs[1], signs[2])
    back = holonomy(inverse_IIIb(e, opp), after, before)
    assert back.check()
    both = compose([fwd, back])
    for g in before.generators:
        assert both[g] == Poly.gen(LAURENT, g)
    with pytest.raises(MoveError):
        inverse_IIIb(e, signs)


def test_IIIb_over_z2():
    before, after = _triangle(Z2, 1)
    e = MoveEvent("IIIb", {"a": "a", "b": "b", "c": "c"})
    h = holonomy_IIIb(e, before, after)
    assert h["a"] == P(Z2, "a + c b") and h.check()
    with pytest.raises(MoveError):
        holonomy_IIIb(e, *_triangle(LAURENT, 1))


def test_compose_checks_endpoints():
    hs = loop_holonomies()
    with pytest.raises(MoveError):
        compose([hs[0], hs[2]])
    with pytest.raises(MoveError):
        compose([])
