import itertools
import random

import pytest
from hypothesis import given, strategies as st

from contactdga.algebra import Z2, P, Poly, check_d_squared, check_differential_index
from contactdga.braid import (Braid, BraidError, brute_force_D, closure_dga, closure_diagram,
                              closure_invariants, components, count_D, enumerate_D, is_admissible,
                              is_pure, path_paths_B, path_poly_B, path_poly_C, path_poly_M,
                              random_braid, torus_position)
from contactdga.diagram import check_grading, thurston_bennequin
from contactdga.lp import cone_feasible

from strategies import braids


def test_D3_listed():
    assert sorted(enumerate_D(3), key=lambda s: (len(s), s)) == [
        (), (1,), (2,), (1, 2), (2, 1), (1, 2, 1)]
    assert list(enumerate_D(1)) == [()]
    assert list(enumerate_D(2)) == [(), (1,)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumeration_matches_brute_force(n):
    # longest admissible sequence over {1..n-1} has length 2^(n-1) - 1
    brute = brute_force_D(n, 2 ** (n - 1) - 1) if n <= 4 else None
    got = list(enumerate_D(n))
    assert len(got) == len(set(got)) == count_D(n)
    assert all(is_admissible(s, n) for s in got)
    if brute is not None:
        assert sorted(got) == sorted(brute)


def test_count_recurrence():
    sizes = [count_D(n) for n in range(1, 7)]
    assert sizes == [1, 2, 6, 42, 1806, 3263442]


def test_enumerate_cap():
    with pytest.raises(OverflowError):
        list(enumerate_D(5, cap=100))


@given(st.lists(st.integers(1, 4), max_size=7))
def test_admissible_definition(seq):
    ok = all(any(seq[k] > seq[i] for k in range(i + 1, j))
             for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] == seq[j])
    assert is_admissible(seq) == ok


def test_parse_and_print():
    assert str(Braid.parse("torus 3 2")) == "torus 3 2"
    b = Braid.parse("q=3; w=1 2 1")
    assert (b.q, tuple(b.word)) == (3, (1, 2, 1))
    assert Braid.parse(str(b)) == b
    with pytest.raises(BraidError):
        Braid.parse("sigma_1^3")


def test_torus_names():
    b = Braid.torus(3, 4)
    assert len(b.word) == 9
    assert b.torus_name(2, 3) == f"b{torus_position(2, 3, 4)}" == "b8"


@given(braids(max_len=8))
def test_B_matches_path_enumeration(b):
    for i in range(1, b.q + 1):
        for j in range(1, b.q + 1):
            want = Poly(Z2, {})
            for w in path_paths_B(b, i, j):
                want = want + Poly.word(Z2, w)
            assert path_poly_B(b, i, j) == want


@given(braids(max_q=4, max_len=7))
def test_C_and_M_recurrence_match_D_n_sums(b):
    for i in range(1, b.q + 1):
        for j in range(1, i + 1):
            assert path_poly_C(b, i, j) == path_poly_C(b, i, j, method="enumerate")
        for j in range(1, b.q + 1):
            assert path_poly_M(b, i, j) == path_poly_M(b, i, j, method="enumerate")


def test_trefoil_closure():
    d = closure_dga(Braid.torus(3, 2))
    assert d.diff["a1"] == P(Z2, "1 + b1 + b3 + b1 b2 b3")
    assert d.diff["a2"] == P(Z2, "b2 + b2 b3 + b1 b2 + b2 b3 b1 b2")


def test_unknot_closure():
    d = closure_dga(Braid.parse("q=1; w="))
    assert d.diff["a1"].is_zero()
    assert closure_invariants(Braid(1, [])) == {"tb": -1, "r": 0}


@given(braids(max_q=5, max_len=10))
def test_closure_dga_is_a_dga(b):
    d = closure_dga(b)
    assert check_d_squared(d)
    assert check_differential_index(d)


@given(braids(max_q=4, max_len=6, connected=True))
def test_closure_diagram_is_lagrangian(b):
    dg = closure_diagram(b)
    assert cone_feasible(dg) is not None
    assert check_grading(dg)
    assert thurston_bennequin(dg) == len(b.word) - b.q


def test_split_closure_rejected():
    with pytest.raises(BraidError):
        closure_diagram(Braid(3, [1, 1]))


def test_permutation_and_components():
    b = Braid.torus(3, 2)
    assert b.permutation() == (2, 1)
    assert components((2, 3, 1, 5, 4)) == [[1, 2, 3], [4, 5]]
    assert is_pure(Braid(3, [1, 1, 2, 2]))
    assert not is_pure(b)


def test_random_braid_deterministic():
    a = [random_braid(random.Random(7)) for _ in range(3)]
    b = [random_braid(random.Random(7)) for _ in range(3)]
    assert a == b
