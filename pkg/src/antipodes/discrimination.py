"""Minimum-error discrimination over polytopal state spaces.

A measurement with k+1 outcomes is an affine map from the state space
into the standard simplex; outcome j is read as the guess "it was state
j".  The discrimination error of a tuple of states is the summed miss
probability, one term per state, and minimizing it over measurements is
a linear program.  The minimum hits zero exactly on jointly antipodal
tuples, which ties this layer to the geometric one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .exact_lp import EQ, GE, Status, make_lp, solve
from .geometry import (
    AffineMap,
    Polytope,
    StandardSimplex,
    as_point,
    member,
)
from .rationals import ratio

__all__ = [
    "DiscriminationError",
    "Measurement",
    "StateSpace",
    "SubadditivityReport",
    "classical_subadditivity_check",
    "error_prob",
    "min_error",
]


class DiscriminationError(ValueError):
    pass


@dataclass(frozen=True)
class StateSpace:
    polytope: Polytope

    @classmethod
    def simplex(cls, n: int) -> "StateSpace":
        """The classical space of probability vectors over n+1 outcomes."""
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise DiscriminationError("n: expected a positive integer")
        return cls(Polytope.from_points(StandardSimplex(n).vertices))

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def vertices(self) -> tuple:
        return self.polytope.spanning.points


@dataclass(frozen=True)
class Measurement:
    """Affine map into the outcome simplex, checked on the space's
    vertices; convexity extends the check to every state."""

    space: StateSpace
    mapping: AffineMap

    def __post_init__(self):
        if self.mapping.out_dim < 2:
            raise DiscriminationError("measurement needs at least two outcomes")
        if self.mapping.in_dim != self.space.dim:
            raise DiscriminationError("measurement does not fit the state space")
        simplex = StandardSimplex(self.mapping.out_dim - 1)
        for idx, v in enumerate(self.space.vertices):
            if not simplex.contains(self.mapping.apply(v)):
                raise DiscriminationError(
                    f"vertex {idx} is mapped outside the outcome simplex"
                )

    @property
    def outcomes(self) -> int:
        return self.mapping.out_dim

    def apply(self, state) -> tuple:
        return self.mapping.apply(as_point(state))


def _checked_states(space: StateSpace, states) -> tuple:
    rows = []
    for idx, s in enumerate(states):
        p = as_point(s)
        if len(p) != space.dim:
            raise DiscriminationError(f"states[{idx}]: wrong dimension")
        if not member(space.polytope, p).inside:
            raise DiscriminationError(f"states[{idx}]: outside the state space")
        rows.append(p)
    return tuple(rows)


def error_prob(measurement: Measurement, states):
    """Sum over j of (1 - probability of outcome j on state j)."""
    pts = _checked_states(measurement.space, states)
    if len(pts) != measurement.outcomes:
        raise DiscriminationError(
            f"expected {measurement.outcomes} states, got {len(pts)}"
        )
    total = ratio(0)
    for j, s in enumerate(pts):
        total = total + 1 - measurement.apply(s)[j]
    return total


def min_error(space: StateSpace, states):
    """Exact minimum discrimination error and a measurement achieving it.

    Variables are the r x (d+1) entries of the affine map (r = number of
    states); feasibility only constrains vertex images to the simplex,
    and the objective collects each state's own outcome probability.
    """
    pts = _checked_states(space, states)
    r = len(pts)
    if r < 2:
        raise DiscriminationError("need at least two states")
    d = space.dim
    width = d + 1

    def col(j, t):
        return j * width + t

    nvars = r * width
    rows = []
    for v in space.vertices:
        for j in range(r):
            coeffs = [ratio(0)] * nvars
            for t in range(d):
                coeffs[col(j, t)] = v[t]
            coeffs[col(j, d)] = ratio(1)
            rows.append((tuple(coeffs), GE, 0))
        coeffs = [ratio(0)] * nvars
        for j in range(r):
            for t in range(d):
                coeffs[col(j, t)] = v[t]
            coeffs[col(j, d)] = ratio(1)
        rows.append((tuple(coeffs), EQ, 1))
    objective = [ratio(0)] * nvars
    for j, s in enumerate(pts):
        for t in range(d):
            objective[col(j, t)] = s[t]
        objective[col(j, d)] = ratio(1)
    outcome = solve(make_lp(nvars, rows, objective=tuple(objective), maximize=True))
    if outcome.status is not Status.FEASIBLE:
        raise DiscriminationError("discrimination program did not optimize")
    matrix = tuple(
        tuple(outcome.point[col(j, t)] for t in range(d)) for j in range(r)
    )
    offset = tuple(outcome.point[col(j, d)] for j in range(r))
    measurement = Measurement(space, AffineMap(matrix, offset))
    value = ratio(r) - outcome.objective_value
    if error_prob(measurement, pts) != value:
        raise DiscriminationError("optimizer does not reproduce its own value")
    return value, measurement


@dataclass(frozen=True)
class SubadditivityReport:
    n: int
    k: int
    trials: int
    seed: int
    all_hold: bool
    worst_slack: object
    failures: tuple


def classical_subadditivity_check(
    n: int, k: int, trials: int, seed: int
) -> SubadditivityReport:
    """Tuple error never beats the summed pairwise errors on Delta_n.

    Samples rational state tuples with a seeded generator and compares
    min_error of the whole (k+1)-tuple against the sum over pairs,
    exactly.  Reports the smallest observed slack.
    """
    for label, value in (("n", n), ("k", k), ("trials", trials), ("seed", seed)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise DiscriminationError(f"{label}: expected an integer")
    if n < 1 or k < 1 or trials < 1:
        raise DiscriminationError("n, k, trials must be positive")
    space = StateSpace.simplex(n)
    master = random.Random(seed)
    worst = None
    failures = []
    for trial in range(trials):
        rng = random.Random(master.getrandbits(64))
        states = []
        for _ in range(k + 1):
            raw = [rng.randint(1, 16) for _ in range(n + 1)]
            total = sum(raw)
            states.append(tuple(ratio(a, total) for a in raw))
        joint, _ = min_error(space, states)
        pair_sum = ratio(0)
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                value, _ = min_error(space, (states[i], states[j]))
                pair_sum = pair_sum + value
        slack = pair_sum - joint
        if worst is None or slack < worst:
            worst = slack
        if slack < 0:
            failures.append(trial)
    return SubadditivityReport(
        n=n,
        k=k,
        trials=trials,
        seed=seed,
        all_hold=not failures,
        worst_slack=worst,
        failures=tuple(failures),
    )
