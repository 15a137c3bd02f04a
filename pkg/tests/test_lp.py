"""Bounded-variable simplex against hand cases and an exact-rational check.

The float solver and the rational solver share nothing but the problem
type: different pivot rules, different tableau layouts, zero tolerance on
the rational side. Agreement on random programs is therefore meaningful.
"""

import math
import random

import pytest

from plantflow.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    check_structure,
    solve_lp,
)
from plantflow.lp_exact import solve_lp_exact

INF = math.inf


def lp(obj, rows, rhs, lower, upper):
    return LinearProgram(objective=tuple(obj),
                         rows=tuple(tuple(r) for r in rows),
                         rhs=tuple(rhs), lower=tuple(lower), upper=tuple(upper))


def test_single_bounded_variable():
    # max x s.t. x <= 0.7 via bound only, no rows
    p = lp([1.0], [], [], [0.0], [0.7])
    s = solve_lp(p)
    assert s.status == OPTIMAL
    assert s.objective_value == pytest.approx(0.7, abs=1e-9)


def test_two_variable_transport():
    # max u with u routed through two parallel arcs of caps 0.3, 0.4
    # x1 + x2 - u = 0; maximise u
    p = lp([0.0, 0.0, 1.0],
           [((0, 1.0), (1, 1.0), (2, -1.0))],
           [0.0],
           [0.0, 0.0, 0.0],
           [0.3, 0.4, INF])
    s = solve_lp(p)
    assert s.status == OPTIMAL
    assert s.objective_value == pytest.approx(0.7, abs=1e-9)


def test_equality_infeasible():
    # x = 2 but x <= 1
    p = lp([1.0], [((0, 1.0),)], [2.0], [0.0], [1.0])
    assert solve_lp(p).status == INFEASIBLE


def test_unbounded_direction():
    # max x with x free above and no rows
    p = lp([1.0], [], [], [0.0], [INF])
    assert solve_lp(p).status == UNBOUNDED


def test_unbounded_through_row():
    # x1 - x2 = 0, both unbounded above, maximise x1
    p = lp([1.0, 0.0], [((0, 1.0), (1, -1.0))], [0.0], [0.0, 0.0], [INF, INF])
    assert solve_lp(p).status == UNBOUNDED


def test_degenerate_vertex_terminates():
    # many redundant rows through the origin; anti-cycling must cope
    rows = [((0, 1.0), (1, k / 4.0)) for k in range(1, 9)]
    p = lp([1.0, -1.0], rows, [0.0] * 8, [0.0, 0.0], [1.0, 1.0])
    s = solve_lp(p)
    assert s.status == OPTIMAL
    assert s.objective_value == pytest.approx(0.0, abs=1e-9)


def test_redundant_row_dropped():
    # duplicated constraint row; phase 1 must drive out or drop its artificial
    p = lp([1.0, 1.0],
           [((0, 1.0), (1, 1.0)), ((0, 1.0), (1, 1.0))],
           [1.0, 1.0],
           [0.0, 0.0], [1.0, 1.0])
    s = solve_lp(p)
    assert s.status == OPTIMAL
    assert s.objective_value == pytest.approx(1.0, abs=1e-9)


def test_negative_rhs_normalised():
    # -x1 = -0.5
    p = lp([1.0], [((0, -1.0),)], [-0.5], [0.0], [1.0])
    s = solve_lp(p)
    assert s.status == OPTIMAL
    assert s.objective_value == pytest.approx(0.5, abs=1e-9)


def test_solution_respects_rows_and_bounds():
    p = lp([0.0, 0.0, 1.0],
           [((0, 1.0), (1, 1.0), (2, -1.0)), ((0, 1.0), (1, -1.0))],
           [0.0, 0.1],
           [0.0, 0.0, 0.0],
           [0.3, 0.4, INF])
    s = solve_lp(p)
    assert s.status == OPTIMAL
    x = s.x
    assert x[0] - x[1] == pytest.approx(0.1, abs=1e-9)
    assert x[0] + x[1] - x[2] == pytest.approx(0.0, abs=1e-9)
    for j, (lo, hi) in enumerate(zip(p.lower, p.upper)):
        assert lo - 1e-9 <= x[j] <= hi + 1e-9


def test_check_structure_rejects_length_mismatch():
    p = lp([1.0, 1.0], [], [], [0.0], [1.0])
    with pytest.raises(ValueError):
        check_structure(p)


def test_check_structure_rejects_bad_bounds():
    p = lp([1.0], [], [], [2.0], [1.0])
    with pytest.raises(ValueError):
        check_structure(p)


def test_check_structure_rejects_out_of_range_column():
    p = lp([1.0], [((3, 1.0),)], [0.0], [0.0], [1.0])
    with pytest.raises(ValueError):
        check_structure(p)


def test_iteration_cap_raises():
    p = lp([0.0, 0.0, 1.0],
           [((0, 1.0), (1, 1.0), (2, -1.0))],
           [0.0],
           [0.0, 0.0, 0.0],
           [0.3, 0.4, INF])
    with pytest.raises(RuntimeError, match="iteration"):
        solve_lp(p, max_iterations=1)


def random_program(rnd: random.Random) -> LinearProgram:
    """Small LP with dyadic data so float arithmetic stays representable."""
    n = rnd.randint(1, 12)
    m = rnd.randint(0, 6)
    dy = lambda: rnd.randint(-8, 8) / 8.0
    obj = [dy() for _ in range(n)]
    rows = []
    for _ in range(m):
        support = rnd.sample(range(n), rnd.randint(1, min(n, 4)))
        rows.append(tuple((j, dy() or 0.5) for j in support))
    rhs = [rnd.randint(-4, 4) / 4.0 for _ in range(m)]
    lower = [0.0] * n
    upper = [INF if rnd.random() < 0.3 else rnd.randint(1, 16) / 4.0
             for _ in range(n)]
    return lp(obj, rows, rhs, lower, upper)


def test_float_simplex_matches_exact_rational():
    rnd = random.Random(20240817)
    statuses = set()
    for _ in range(100):
        p = random_program(rnd)
        fast = solve_lp(p)
        slow = solve_lp_exact(p)
        assert fast.status == slow.status, p
        statuses.add(fast.status)
        if fast.status == OPTIMAL:
            assert fast.objective_value == pytest.approx(
                slow.objective_value, abs=1e-9)
    # the sample must actually exercise every outcome
    assert statuses == {OPTIMAL, INFEASIBLE, UNBOUNDED}
