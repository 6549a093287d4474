import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from contactdga.diagram import build_diagram, builtin_spec
from contactdga.lp import (ConeSystem, LPError, MoveSpec, cone_feasible, cone_system,
                           move_feasible, move_inequalities, solve_lp, witness_json)
from contactdga.reidemeister import loop_diagrams


def _vertex_oracle(A, b, c):
    """max c.x over Ax <= b, x >= 0 by enumerating vertices (2 variables)."""
    rows = [(list(map(Fraction, r)), Fraction(v)) for r, v in zip(A, b)]
    rows += [([Fraction(-1), Fraction(0)], Fraction(0)), ([Fraction(0), Fraction(-1)], Fraction(0))]
    best = None
    for (r1, v1), (r2, v2) in itertools.combinations(rows, 2):
        det = r1[0] * r2[1] - r1[1] * r2[0]
        if det == 0:
            continue
        x = [(v1 * r2[1] - r1[1] * v2) / det, (r1[0] * v2 - v1 * r2[0]) / det]
        if all(r[0] * x[0] + r[1] * x[1] <= v for r, v in rows):
            val = c[0] * x[0] + c[1] * x[1]
            best = val if best is None else max(best, val)
    return best


small = st.integers(-4, 4)


@given(st.lists(st.tuples(small, small, st.integers(-6, 6)), min_size=1, max_size=4),
       st.tuples(small, small))
def test_solve_lp_against_vertices(cons, c):
    A = [[a, b] for a, b, _ in cons] + [[1, 0], [0, 1]]
    b = [v for _, _, v in cons] + [10, 10]
    res = solve_lp(A, b, list(c))
    best = _vertex_oracle(A, b, c)
    if best is None:
        assert res.status == "infeasible"
    else:
        assert res.status == "optimal"
        assert res.value == best
        assert all(sum(Fraction(a) * x for a, x in zip(r, res.x)) <= v for r, v in zip(A, b))


def test_small_cases():
    assert solve_lp([[1]], [1], [1]).value == 1
    assert solve_lp([[-1]], [0], [1]).status == "unbounded"
    assert solve_lp([[-1], [1]], [-1, 0], [1]).status == "infeasible"
    with pytest.raises(LPError):
        solve_lp([[1, 2]], [1], [1])


@given(st.lists(st.tuples(small, small), min_size=1, max_size=4))
def test_two_dimensional_cone(rows):
    """{h > 0, E h > 0} in the plane is nonempty iff some direction (1, s),
    s > 0, satisfies all rows; the critical slopes are rational, so checking
    midpoints between them decides it."""
    crit = sorted({Fraction(-a, b) for a, b in rows if b} | {Fraction(0)})
    cands = [c + 1 for c in crit[-1:]] + [(x + y) / 2 for x, y in zip(crit, crit[1:])]
    cands = [s for s in cands if s > 0] or [Fraction(1)]
    expect = any(all(a + b * s > 0 for a, b in rows) for s in cands)
    h = ConeSystem([list(r) for r in rows], 2).solve()
    assert (h is not None) == expect
    if h is not None:
        assert all(x > 0 for x in h) and all(a * h[0] + b * h[1] > 0 for a, b in rows)


def test_trefoil_witness_is_exact():
    d = build_diagram(builtin_spec("trefoil"))
    h = cone_feasible(d)
    assert h is not None and all(isinstance(x, Fraction) for x in h)
    assert cone_system(d).satisfied_by(h)
    assert witness_json(h) == [str(x) for x in h]


def test_kinks():
    assert cone_feasible(build_diagram(builtin_spec("kink"))) is not None
    assert cone_feasible(build_diagram(builtin_spec("kink-infeasible"))) is None


def test_loop_moves_are_feasible():
    ds, moves = loop_diagrams()
    for d, m in zip(ds, moves):
        ok, w = move_feasible(d, m)
        assert ok
        if w is not None:
            extra = move_inequalities(d, m)
            assert cone_system(d, extra).satisfied_by(w)


def test_first_loop_move_inequality():
    # the finger move needs h(a2) + h(b1) - h(a1) > 0
    ds, moves = loop_diagrams()
    assert move_inequalities(ds[0], moves[0]) == [[-1, 1, 1, 0, 0]]


def test_movespec_json():
    m = MoveSpec("IIIb", ["a1", "c1", "d"], vertex="d")
    assert MoveSpec.from_json(m.to_json()) == m


def test_bad_move():
    d = build_diagram(builtin_spec("trefoil"))
    with pytest.raises(LPError):
        move_inequalities(d, MoveSpec("IIinv", "U2"))
    with pytest.raises(LPError):
        move_inequalities(d, MoveSpec("V", "U2"))
