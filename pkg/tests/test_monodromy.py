import random
import warnings
from math import gcd

import pytest

from contactdga.algebra import Z2, SizeGuardExceeded, Poly, check_chain_map, extend_hom
from contactdga.augment import construct_augmentation
from contactdga.braid import Braid, closure_dga
from contactdga.monodromy import (MonodromyError, check_muBCM, conjugation_holonomy,
                                  distinguished_m, loop_monodromy, minimal_period,
                                  orbit_labels, orbit_sequence, pattern_case, power,
                                  predicted_pattern, refined_pattern, torus_monodromy,
                                  torus_monodromy_size)


def _pairs(limit, knots_only=False):
    for p in range(1, limit):
        for q in range(2, limit - p + 1):
            if p % q == 0 or q % p == 0:
                continue
            if knots_only and gcd(p, q) > 1:
                continue
            yield p, q


@pytest.fixture(autouse=True)
def _no_link_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


def test_images_are_cycles_and_augmentation_is_invariant():
    for p, q in [(2, 3), (3, 2), (3, 4)]:
        b = Braid.torus(p, q)
        dga = closure_dga(b)
        mu = torus_monodromy(p, q)
        for g in mu.source.generators:
            assert dga.d(mu[g]).is_zero()
        aug = construct_augmentation(b)
        rng = random.Random(p * 10 + q)
        for _ in range(20):
            g = rng.choice(sorted(dga.generators))
            x = Poly.gen(Z2, rng.choice(b.crossing_names))
            assert aug.eval(x + dga.diff[g]) == aug.eval(x)


def test_trefoil_braid_full_loop_is_third_power():
    b = Braid.torus(3, 2)
    full = loop_monodromy(b).mu
    mu3 = power(torus_monodromy(3, 2), 3)
    assert full.assignment == mu3.assignment
    # one letter per step, and each step is a map of the crossing algebra
    h, nb = conjugation_holonomy(b)
    assert check_chain_map(h) and nb.word == b.word


@pytest.mark.parametrize("p,q", [(p, q) for p in range(1, 8) for q in range(2, 9 - p)])
def test_conjugations_give_closed_form(p, q):
    b = Braid.torus(p, q)
    assert loop_monodromy(b, steps=q - 1).mu.assignment == torus_monodromy(p, q).assignment


def test_shift_on_upper_rows():
    p, q = 3, 4
    b = Braid.torus(p, q)
    mu = torus_monodromy(p, q)
    for m in range(1, q):
        for n in range(2, p + 1):
            assert mu[b.torus_name(m, n)] == Poly.gen(Z2, b.torus_name(m, n - 1))


def test_size_bound():
    for p, q in [(2, 3), (3, 4), (2, 5), (4, 3)]:
        mu = torus_monodromy(p, q)
        assert sum(len(v) for v in mu.assignment.values()) <= torus_monodromy_size(p, q)
    # (4, 5) is far beyond the default guard, and the product guard trips
    assert torus_monodromy_size(4, 5) > 10 ** 9
    with pytest.raises(SizeGuardExceeded):
        torus_monodromy(4, 5)


def test_bad_pairs():
    with pytest.raises(MonodromyError):
        orbit_sequence(4, 2)
    with pytest.raises(MonodromyError):
        distinguished_m(3, 6)
    with pytest.raises(MonodromyError):
        torus_monodromy(1, 1)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        orbit_sequence(4, 6)
    assert any("link" in str(w.message) for w in caught)


def test_orbit_has_p_plus_q_elements():
    for p, q in _pairs(12):
        labs = orbit_labels(p, q)
        assert len(labs) == p + q and len(set(labs)) == p + q


@pytest.mark.parametrize("p,q", [(2, 3), (3, 2), (2, 5), (3, 5), (5, 3), (4, 3), (7, 4)])
def test_orbit_modes_agree(p, q):
    closed = orbit_sequence(p, q)
    assert orbit_sequence(p, q, mode="iterate") == closed
    if p + q <= 5:
        # symbolic powers of mu grow too fast beyond this
        assert orbit_sequence(p, q, mode="substitute") == closed


def test_sequences_match_refined_pattern_and_have_period_p_plus_q():
    for p, q in _pairs(16):
        seq = orbit_sequence(p, q)
        assert seq == refined_pattern(p, q), (p, q)
        assert minimal_period(seq) == p + q, (p, q)


def test_stated_patterns_hold_when_q_exceeds_p():
    for p, q in _pairs(16):
        if q > p:
            assert orbit_sequence(p, q) == predicted_pattern(p, q)
            assert pattern_case(p, q) in (1, 2)


def test_small_values():
    assert orbit_sequence(3, 2) == [0, 0, 1, 1, 1]
    assert orbit_sequence(2, 3) == predicted_pattern(2, 3)
    assert minimal_period([0, 1, 0, 1]) == 2
    assert minimal_period([0, 0, 1]) == 3


@pytest.mark.parametrize("p,q", [(2, 3), (3, 2), (3, 4), (2, 5)])
def test_muBCM_rows(p, q):
    reps = check_muBCM(p, q)
    for name, rep in reps.items():
        assert rep, (name, rep.failures[:3])
        assert rep.checked > 0 or name in ("C", "C_i1")


def test_orbit_steps_return_after_p_plus_q():
    # symbolic iteration for a small knot: mu^(p+q) fixes b_{m,p} after augmentation
    p, q = 2, 3
    b = Braid.torus(p, q)
    mu = torus_monodromy(p, q)
    aug = construct_augmentation(b)
    g = Poly.gen(Z2, b.torus_name(distinguished_m(p, q), p))
    x = g
    for _ in range(p + q):
        x = extend_hom(mu, x)
    assert aug.eval(x) == aug.eval(g)
