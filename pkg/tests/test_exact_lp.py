"""Solver-level tests: known optima, certificate round-trips, termination."""

import pytest
from hypothesis import given, settings, strategies as st

from antipodes.exact_lp import (
    EQ,
    GE,
    LE,
    LPError,
    Status,
    check_duals,
    check_farkas,
    check_point,
    check_ray,
    check_strict_emptiness,
    make_lp,
    solve,
    solve_strict,
)
from antipodes.rationals import ratio


def test_infeasible_band_has_farkas_certificate():
    lp = make_lp(1, [((1,), LE, 2), ((1,), GE, 5)])
    out = solve(lp)
    assert out.status is Status.INFEASIBLE
    assert check_farkas(lp, out.farkas)


def test_box_maximum_with_duals():
    lp = make_lp(
        2,
        [
            ((1, 0), LE, 1),
            ((0, 1), LE, 1),
            ((1, 0), GE, 0),
            ((0, 1), GE, 0),
        ],
        objective=(1, 2),
    )
    out = solve(lp)
    assert out.status is Status.FEASIBLE
    assert out.objective_value == 3
    assert out.point == (ratio(1), ratio(1))
    assert check_duals(lp, out.duals, out.objective_value)


def test_diagonal_cut_maximum():
    lp = make_lp(
        2,
        [
            ((1, 1), LE, "3/2"),
            ((1, 0), GE, 0),
            ((0, 1), GE, 0),
        ],
        objective=(1, 1),
    )
    out = solve(lp)
    assert out.status is Status.FEASIBLE
    assert out.objective_value == ratio(3, 2)


def test_minimisation_with_equality():
    lp = make_lp(
        2,
        [
            ((1, 0), GE, "1/3"),
            ((-1, 1), GE, 0),
            ((1, 1), EQ, 1),
        ],
        objective=(0, 1),
        maximize=False,
    )
    out = solve(lp)
    assert out.status is Status.FEASIBLE
    # y is minimised at x = y = 1/2 on the segment x + y = 1, y >= x.
    assert out.objective_value == ratio(1, 2)
    assert check_duals(lp, out.duals, out.objective_value)


def test_unbounded_has_improving_ray():
    lp = make_lp(1, [((1,), GE, 0)], objective=(1,), maximize=True)
    out = solve(lp)
    assert out.status is Status.UNBOUNDED
    assert check_ray(lp, out.ray)


def test_feasibility_only_returns_point():
    lp = make_lp(2, [((1, 1), EQ, 1), ((1, -1), LE, "1/4")])
    out = solve(lp)
    assert out.status is Status.FEASIBLE
    assert check_point(lp, out.point)
    assert out.objective_value is None


def test_strict_interval_point_has_margin():
    lp = make_lp(1, [((1,), GE, 0), ((1,), LE, 1)])
    out = solve_strict(lp, [0, 1])
    assert out.status is Status.FEASIBLE
    (x,) = out.point
    assert 0 < x < 1
    assert out.objective_value > 0


def test_strictly_empty_point_interval():
    # x >= 0 strictly together with x <= 0 has no solution; the weak
    # system is the single point 0.
    lp = make_lp(1, [((1,), GE, 0), ((1,), LE, 0)])
    out = solve_strict(lp, [0])
    assert out.status is Status.INFEASIBLE
    assert check_strict_emptiness(lp, [0], out.farkas)


def test_strict_on_weakly_infeasible_system():
    lp = make_lp(1, [((1,), GE, 3), ((1,), LE, 2)])
    out = solve_strict(lp, [0])
    assert out.status is Status.INFEASIBLE
    assert check_strict_emptiness(lp, [0], out.farkas)
    # The certificate is in fact the stronger weak-infeasibility kind.
    assert check_farkas(lp, out.farkas)


def test_strict_rejects_equality_rows():
    lp = make_lp(1, [((1,), EQ, 0)])
    with pytest.raises(LPError):
        solve_strict(lp, [0])


def test_malformed_rows_rejected():
    with pytest.raises(LPError):
        make_lp(2, [((1,), LE, 0)])
    with pytest.raises(LPError):
        make_lp(2, [((1, 2), "<", 0)])
    with pytest.raises(LPError):
        make_lp(0, [((), LE, 0)])


def test_degenerate_program_terminates():
    # Beale's cycling trap for the classic most-negative rule; the stall
    # switch to Bland's rule must get through it.
    lp = make_lp(
        4,
        [
            (("1/4", -60, "-1/25", 9), LE, 0),
            (("1/2", -90, "-1/50", 3), LE, 0),
            ((0, 0, 1, 0), LE, 1),
            ((1, 0, 0, 0), GE, 0),
            ((0, 1, 0, 0), GE, 0),
            ((0, 0, 1, 0), GE, 0),
            ((0, 0, 0, 1), GE, 0),
        ],
        objective=("3/4", -150, "1/50", -6),
        maximize=True,
    )
    out = solve(lp)
    assert out.status is Status.FEASIBLE
    assert out.objective_value == ratio(1, 20)
    assert check_duals(lp, out.duals, out.objective_value)


# ---------------------------------------------------------------------------
# randomised programs: every outcome must carry a verifying certificate

_coeff = st.integers(-4, 4).map(ratio)
_small = st.fractions(min_value=-3, max_value=3, max_denominator=4).map(
    lambda f: ratio(f.numerator, f.denominator)
)


@st.composite
def _programs(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 5))
    rows = []
    for _ in range(m):
        coeffs = tuple(draw(_coeff) for _ in range(n))
        rel = draw(st.sampled_from([LE, EQ, GE]))
        rows.append((coeffs, rel, draw(_small)))
    objective = None
    if draw(st.booleans()):
        objective = tuple(draw(_coeff) for _ in range(n))
    return make_lp(n, rows, objective=objective, maximize=draw(st.booleans()))


@settings(max_examples=200, deadline=None)
@given(_programs())
def test_every_outcome_reverifies(lp):
    out = solve(lp)
    if out.status is Status.FEASIBLE:
        assert check_point(lp, out.point)
        if lp.objective is not None:
            assert out.objective_value is not None
            assert check_duals(lp, out.duals, out.objective_value)
    elif out.status is Status.INFEASIBLE:
        assert check_farkas(lp, out.farkas)
    else:
        assert check_ray(lp, out.ray)


@settings(max_examples=100, deadline=None)
@given(_programs())
def test_solver_is_deterministic(lp):
    assert repr(solve(lp)) == repr(solve(lp))


@st.composite
def _inequality_programs(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 4))
    rows = []
    for _ in range(m):
        coeffs = tuple(draw(_coeff) for _ in range(n))
        rows.append((coeffs, draw(st.sampled_from([LE, GE])), draw(_small)))
    strict = draw(st.sets(st.integers(0, m - 1), min_size=1))
    return make_lp(n, rows), sorted(strict)


@settings(max_examples=200, deadline=None)
@given(_inequality_programs())
def test_strict_outcomes_reverify(case):
    lp, strict = case
    out = solve_strict(lp, strict)
    if out.status is Status.FEASIBLE:
        assert check_point(lp, out.point, strict)
        # A strict solution also solves the weak system.
        assert solve(lp).status is Status.FEASIBLE
    else:
        assert check_strict_emptiness(lp, strict, out.farkas)
        # The weak system may still be feasible, but only on the boundary:
        weak = solve(lp)
        if weak.status is Status.FEASIBLE:
            assert not check_point(lp, weak.point, strict)
