import random

import pytest
from hypothesis import given

from contactdga.algebra import P, Z2
from contactdga.augment import (Augmentation, AugmentationError, admissible_walks,
                                augmented_graph, construct_augmentation, eval_aug,
                                eval_BCM_fast, euclid_blocks, euclid_prediction, loop_of,
                                realized_graph, reverse_path, validation_failures)
from contactdga.braid import Braid, closure_dga, is_pure, path_poly_C, path_poly_M, random_braid

from strategies import braids


def test_trefoil_augmentation():
    aug = construct_augmentation(Braid.torus(3, 2))
    assert aug.labels == [(1, 1, 1)]
    assert aug.X == {"b1"}
    d = closure_dga(aug.braid)
    assert all(aug.eval(d.diff[a]) == 0 for a in ("a1", "a2"))


def test_augmentation_json_roundtrip():
    aug = construct_augmentation(Braid.torus(3, 4))
    back = Augmentation.from_json(aug.to_json())
    assert back.X == aug.X


@given(braids(max_q=4, max_len=8))
def test_constructed_augmentation_kills_differentials(b):
    aug = construct_augmentation(b)
    d = closure_dga(b)
    for m in range(1, b.q + 1):
        assert eval_aug(aug, d.diff[f"a{m}"]) == 0


@given(braids(max_q=6, max_len=12))
def test_constructed_augmentation_is_valid(b):
    # epsilon of d(a_m) through Z/2 path tables; no expansion needed
    aug = construct_augmentation(b)
    assert all(eval_BCM_fast(aug, "C", m, m) == 1 for m in range(1, b.q + 1))
    assert realized_graph(b, aug.X) == augmented_graph(b.permutation()).edge_set()


@given(braids(max_q=4, max_len=8))
def test_fast_evaluation_matches_polynomials(b):
    aug = construct_augmentation(b)
    for i in range(1, b.q + 1):
        for j in range(1, i + 1):
            assert eval_BCM_fast(aug, "C", i, j) == aug.eval(path_poly_C(b, i, j))
        for j in range(1, b.q + 1):
            assert eval_BCM_fast(aug, "M", i, j) == aug.eval(path_poly_M(b, i, j))


def test_pure_braids_have_empty_augmentation():
    rng = random.Random(11)
    seen = 0
    for _ in range(400):
        b = random_braid(rng, max_q=5, max_len=10, min_q=2)
        if is_pure(b):
            seen += 1
            assert construct_augmentation(b).X == frozenset()
    assert seen >= 5


def test_bad_set_is_reported():
    b = Braid.torus(3, 2)
    bad = Augmentation(b, frozenset({"b2"}))
    assert validation_failures(bad)
    assert not bad.is_valid()


def test_graph_of_a_three_cycle():
    g = augmented_graph((2, 3, 1))
    # chords for the two non-maximal elements 1 and 2
    assert sorted(p for p, *_ in g.chords) == [1, 2]
    assert loop_of(g, 3) == [3, 1, 2, 3]
    assert g.plus_minus(1) == (1, 1)
    with pytest.raises(AugmentationError):
        g.plus_minus(3)


def test_reverse_path():
    g = augmented_graph((3, 1, 2))
    assert reverse_path(g, 2, 3) == [2, 1, 3]
    with pytest.raises(AugmentationError):
        reverse_path(g, 3, 1)


def test_walks_on_small_graph():
    adj = {1: [2], 2: [1, 3], 3: [1]}
    walks = admissible_walks(adj, 3, 1, 3)
    assert () in walks


def test_euclid_example():
    assert euclid_prediction(11, 26) == [11, 4, 4, 3, 1, 1, 1]
    r = euclid_blocks(11, 26)
    assert r["agree"]


@pytest.mark.parametrize("p,q", [(p, q) for p in range(2, 13) for q in range(2, 13)
                                 if p % q and q % p])
def test_euclid_blocks_agree(p, q):
    assert euclid_blocks(p, q)["agree"]
