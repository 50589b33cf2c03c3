"""Certified linear programming over exact rationals.

Every geometric decision in this package bottoms out in `solve` or
`solve_strict`.  Outcomes never come bare: a feasibility claim carries a
point, an infeasibility claim carries nonnegative combination multipliers,
an unboundedness claim carries an improving ray, and an optimality claim
carries dual multipliers.  All certificates re-verify by direct
substitution (see the check_* helpers), and the solver re-checks its own
output before returning, so a bug in the pivoting can only surface as an
internal error, never as a wrong verdict.

The engine is a dense two-phase primal simplex on rationals.  Variables are
free and get split into nonnegative pairs; rows receive slacks and
artificials in the usual way.  Pivoting is Dantzig's rule with a permanent
switch to Bland's rule after a run of degenerate steps, which keeps the
solver fast on typical inputs and terminating on all of them.  The whole
pipeline is deterministic: identical programs produce identical outcomes,
certificates included.

`solve_strict` decides systems in which selected inequality rows must hold
strictly.  It maximises a margin variable bounded by 1; a positive optimum
yields a strictly feasible point, a zero optimum yields dual multipliers
that certify strict emptiness (a nonnegative combination of the rows that
proves `0 <= rhs` with positive weight on at least one strict row, or
outright weak infeasibility).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .rationals import ONE, ZERO, ratio

LE = "<="
EQ = "="
GE = ">="
_RELATIONS = (LE, EQ, GE)

# Consecutive degenerate pivots tolerated before switching to Bland's rule.
_STALL_LIMIT = 24


class LPError(ValueError):
    """Malformed linear program (lengths, relations, bad scalars)."""


class SolverInvariantError(RuntimeError):
    """A solver-produced certificate failed its own re-verification."""


class Status(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: object

    def oriented(self):
        """Coefficients and rhs with >= rows negated, so <= / = remain."""
        if self.relation == GE:
            return tuple(-a for a in self.coeffs), -self.rhs
        return self.coeffs, self.rhs

    def slack(self, x):
        """rhs - coeffs.x in the oriented sense (>=0 means satisfied)."""
        coeffs, rhs = self.oriented()
        value = rhs - _dot(coeffs, x)
        if self.relation == EQ:
            return value if value == 0 else None
        return value


@dataclass(frozen=True)
class LinearProgram:
    num_vars: int
    constraints: tuple
    objective: Optional[tuple] = None
    maximize: bool = True


@dataclass(frozen=True)
class LPOutcome:
    status: Status
    point: Optional[tuple] = None
    objective_value: Optional[object] = None
    farkas: Optional[tuple] = None
    ray: Optional[tuple] = None
    duals: Optional[tuple] = None


def _dot(a, b):
    total = ZERO
    for x, y in zip(a, b):
        total += x * y
    return total


def make_lp(num_vars, rows, objective=None, maximize=True) -> LinearProgram:
    """Validating constructor; accepts ints and 'p/q' strings as scalars."""
    if not isinstance(num_vars, int) or num_vars < 1:
        raise LPError("num_vars must be a positive integer")
    constraints = []
    for idx, row in enumerate(rows):
        try:
            coeffs, relation, rhs = row
        except (TypeError, ValueError) as exc:
            raise LPError(f"row {idx}: expected (coeffs, relation, rhs)") from exc
        if relation not in _RELATIONS:
            raise LPError(f"row {idx}: unknown relation {relation!r}")
        coeffs = tuple(ratio(a) for a in coeffs)
        if len(coeffs) != num_vars:
            raise LPError(
                f"row {idx}: {len(coeffs)} coefficients for {num_vars} variables"
            )
        constraints.append(Constraint(coeffs, relation, ratio(rhs)))
    if objective is not None:
        objective = tuple(ratio(c) for c in objective)
        if len(objective) != num_vars:
            raise LPError("objective length does not match num_vars")
    if not constraints:
        raise LPError("a program needs at least one constraint")
    return LinearProgram(num_vars, tuple(constraints), objective, bool(maximize))


# ---------------------------------------------------------------------------
# certificate verification (public, pure substitution)


def check_point(lp: LinearProgram, point, strict_rows=()) -> bool:
    """Does the point satisfy every row, strictly on the listed rows?"""
    if len(point) != lp.num_vars:
        return False
    strict = set(strict_rows)
    for i, con in enumerate(lp.constraints):
        gap = con.slack(point)
        if gap is None or gap < 0:
            return False
        if i in strict and gap == 0:
            return False
    return True


def check_farkas(lp: LinearProgram, mults) -> bool:
    """Nonnegative-combination proof that the weak system is empty.

    Multipliers are indexed by row, nonnegative on inequality rows, free on
    equalities; the combination of oriented rows must cancel every variable
    while the combined rhs is negative, an evident contradiction with
    0 <= 0.
    """
    if len(mults) != len(lp.constraints):
        return False
    combo = [ZERO] * lp.num_vars
    rhs_total = ZERO
    for w, con in zip(mults, lp.constraints):
        if con.relation != EQ and w < 0:
            return False
        coeffs, rhs = con.oriented()
        for j, a in enumerate(coeffs):
            combo[j] += w * a
        rhs_total += w * rhs
    return all(c == 0 for c in combo) and rhs_total < 0


def check_strict_emptiness(lp: LinearProgram, strict_rows, mults) -> bool:
    """Certificate that no point satisfies the system with the listed
    inequality rows strict.

    Same shape as a Farkas certificate, but the combined rhs may reach 0
    provided some strict row carries positive weight: the combination then
    proves sum <= 0 while strictness would force it > 0.
    """
    if len(mults) != len(lp.constraints):
        return False
    strict = set(strict_rows)
    combo = [ZERO] * lp.num_vars
    rhs_total = ZERO
    strict_mass = ZERO
    for i, (w, con) in enumerate(zip(mults, lp.constraints)):
        if con.relation != EQ and w < 0:
            return False
        coeffs, rhs = con.oriented()
        for j, a in enumerate(coeffs):
            combo[j] += w * a
        rhs_total += w * rhs
        if i in strict:
            strict_mass += w
    if any(c != 0 for c in combo):
        return False
    return rhs_total < 0 or (rhs_total <= 0 and strict_mass > 0)


def check_ray(lp: LinearProgram, ray) -> bool:
    """Recession direction along which the objective improves forever."""
    if lp.objective is None or len(ray) != lp.num_vars:
        return False
    if all(r == 0 for r in ray):
        return False
    for con in lp.constraints:
        coeffs, _ = con.oriented()
        drift = _dot(coeffs, ray)
        if con.relation == EQ:
            if drift != 0:
                return False
        elif drift > 0:
            return False
    gain = _dot(lp.objective, ray)
    return gain > 0 if lp.maximize else gain < 0


def check_duals(lp: LinearProgram, mults, optimum) -> bool:
    """Optimality proof: the combination of oriented rows dominates the
    objective and reproduces the optimal value.

    With all variables free, domination degenerates to equality on every
    coordinate.  Stated for the maximisation form; minimisation is checked
    through negation.
    """
    if lp.objective is None or len(mults) != len(lp.constraints):
        return False
    sign = ONE if lp.maximize else -ONE
    target = tuple(sign * c for c in lp.objective)
    combo = [ZERO] * lp.num_vars
    rhs_total = ZERO
    for w, con in zip(mults, lp.constraints):
        if con.relation != EQ and w < 0:
            return False
        coeffs, rhs = con.oriented()
        for j, a in enumerate(coeffs):
            combo[j] += w * a
        rhs_total += w * rhs
    if any(c != t for c, t in zip(combo, target)):
        return False
    return rhs_total == sign * optimum


# ---------------------------------------------------------------------------
# standard form

class _Standard:
    """Split free variables, add slacks, normalise rhs signs.

    Columns 0..2n-1 are the split pairs (x_j = col 2j - col 2j+1), then one
    slack column per inequality row.  Row i of the original program becomes
    sign_i * (row with slack) so the standard rhs is nonnegative.
    """

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.num_vars
        m = len(lp.constraints)
        self.slack_col = [None] * m
        ncols = 2 * n
        for i, con in enumerate(lp.constraints):
            if con.relation != EQ:
                self.slack_col[i] = ncols
                ncols += 1
        self.nstruct = ncols
        self.sign = []
        self.rows = []
        self.rhs = []
        for i, con in enumerate(lp.constraints):
            row = [ZERO] * ncols
            for j, a in enumerate(con.coeffs):
                row[2 * j] = a
                row[2 * j + 1] = -a
            if con.relation == LE:
                row[self.slack_col[i]] = ONE
            elif con.relation == GE:
                row[self.slack_col[i]] = -ONE
            sign = ONE if con.rhs >= 0 else -ONE
            if sign < 0:
                row = [-a for a in row]
            self.sign.append(sign)
            self.rows.append(row)
            self.rhs.append(sign * con.rhs)

    def objective_min(self):
        """Internal objective (minimisation) over structural columns."""
        coeffs = [ZERO] * self.nstruct
        sign = -ONE if self.lp.maximize else ONE
        for j, c in enumerate(self.lp.objective):
            coeffs[2 * j] = sign * c
            coeffs[2 * j + 1] = -sign * c
        return coeffs

    def point_from(self, values):
        return tuple(
            values[2 * j] - values[2 * j + 1] for j in range(self.lp.num_vars)
        )

    def row_mults_from(self, y):
        """Map standard-row multipliers to oriented original-row multipliers.

        For <= and = rows the oriented row equals the original, and the
        multiplier is -sign * y; for >= rows orientation negates once more.
        The identities checked by check_farkas / check_duals hold by
        construction; callers re-verify anyway.
        """
        out = []
        for i, con in enumerate(self.lp.constraints):
            w = -self.sign[i] * y[i]
            if con.relation == GE:
                w = -w
            out.append(w)
        return tuple(out)


class _Tableau:
    """Dense tableau with separate objective row and explicit basis."""

    def __init__(self, std: _Standard):
        self.std = std
        self.m = len(std.rows)
        self.nstruct = std.nstruct
        self.art = [self.nstruct + i for i in range(self.m)]
        width = self.nstruct + self.m + 1
        self.rows = []
        for i in range(self.m):
            row = list(std.rows[i]) + [ZERO] * self.m + [std.rhs[i]]
            row[self.art[i]] = ONE
            self.rows.append(row)
        self.width = width
        self.basis = list(self.art)
        self.active = [True] * self.m
        self.obj = [ZERO] * width

    # -- pivoting ---------------------------------------------------------

    def _pivot(self, prow, pcol, with_obj=True):
        row = self.rows[prow]
        piv = row[pcol]
        if piv != 1:
            inv = ONE / piv
            self.rows[prow] = row = [a * inv for a in row]
        for r in range(self.m):
            if r == prow or not self.active[r]:
                continue
            factor = self.rows[r][pcol]
            if factor != 0:
                target = self.rows[r]
                for j, a in enumerate(row):
                    if a != 0:
                        target[j] -= factor * a
        if with_obj:
            factor = self.obj[pcol]
            if factor != 0:
                for j, a in enumerate(row):
                    if a != 0:
                        self.obj[j] -= factor * a
        self.basis[prow] = pcol

    def _optimize(self):
        """Run simplex steps until optimal or unbounded.

        Entering columns are structural only; artificial columns never
        re-enter.  Returns None when optimal, else the entering column
        witnessing unboundedness.
        """
        stall = 0
        bland = False
        while True:
            pcol = None
            if bland:
                for j in range(self.nstruct):
                    if self.obj[j] < 0:
                        pcol = j
                        break
            else:
                best = ZERO
                for j in range(self.nstruct):
                    v = self.obj[j]
                    if v < best:
                        best = v
                        pcol = j
            if pcol is None:
                return None
            prow = None
            best_ratio = None
            for r in range(self.m):
                if not self.active[r]:
                    continue
                a = self.rows[r][pcol]
                if a > 0:
                    q = self.rows[r][-1] / a
                    if (
                        best_ratio is None
                        or q < best_ratio
                        or (q == best_ratio and self.basis[r] < self.basis[prow])
                    ):
                        best_ratio = q
                        prow = r
            if prow is None:
                return pcol
            if best_ratio == 0:
                stall += 1
                if stall >= _STALL_LIMIT:
                    bland = True
            else:
                stall = 0
            self._pivot(prow, pcol)

    # -- phases -----------------------------------------------------------

    def phase1(self) -> bool:
        for j in range(self.width):
            total = ZERO
            for r in range(self.m):
                total += self.rows[r][j]
            self.obj[j] = (ONE if self.nstruct <= j < self.width - 1 else ZERO) - total
        escape = self._optimize()
        if escape is not None:
            raise SolverInvariantError("phase one reported unbounded")
        if self.obj[-1] != 0:
            return False
        self._evict_artificials()
        return True

    def phase1_duals(self):
        # Reduced cost of artificial i is 1 - y_i, and the column is e_i.
        return [ONE - self.obj[self.art[i]] for i in range(self.m)]

    def _evict_artificials(self):
        for r in range(self.m):
            if not self.active[r] or self.basis[r] < self.nstruct:
                continue
            pcol = None
            for j in range(self.nstruct):
                if self.rows[r][j] != 0:
                    pcol = j
                    break
            if pcol is None:
                # Original row was redundant; retire it.
                self.active[r] = False
            else:
                self._pivot(r, pcol, with_obj=False)

    def phase2(self, cost_struct):
        cost = list(cost_struct) + [ZERO] * self.m + [ZERO]
        obj = list(cost)
        for r in range(self.m):
            if not self.active[r]:
                continue
            cb = cost[self.basis[r]]
            if cb != 0:
                for j in range(self.width):
                    a = self.rows[r][j]
                    if a != 0:
                        obj[j] -= cb * a
        self.obj = obj
        return self._optimize()

    # -- extraction -------------------------------------------------------

    def struct_values(self):
        values = [ZERO] * self.nstruct
        for r in range(self.m):
            if self.active[r] and self.basis[r] < self.nstruct:
                values[self.basis[r]] = self.rows[r][-1]
        return values

    def ray_values(self, pcol):
        direction = [ZERO] * self.nstruct
        direction[pcol] = ONE
        for r in range(self.m):
            if self.active[r] and self.basis[r] < self.nstruct:
                direction[self.basis[r]] = -self.rows[r][pcol]
        return direction

    def duals(self):
        return [-self.obj[self.art[i]] for i in range(self.m)]


# ---------------------------------------------------------------------------
# public solving interface


def solve(lp: LinearProgram) -> LPOutcome:
    """Decide a weak system, optionally optimising a linear objective.

    Returns FEASIBLE with a point (and, given an objective, its optimal
    value plus verified dual multipliers), INFEASIBLE with a Farkas
    certificate, or UNBOUNDED with an improving ray.
    """
    _validate(lp)
    std = _Standard(lp)
    tab = _Tableau(std)
    if not tab.phase1():
        mults = std.row_mults_from(tab.phase1_duals())
        if not check_farkas(lp, mults):
            raise SolverInvariantError("infeasibility certificate failed")
        return LPOutcome(Status.INFEASIBLE, farkas=mults)
    if lp.objective is None:
        point = std.point_from(tab.struct_values())
        if not check_point(lp, point):
            raise SolverInvariantError("feasible point failed substitution")
        return LPOutcome(Status.FEASIBLE, point=point)
    escape = tab.phase2(std.objective_min())
    if escape is not None:
        ray = std.point_from(tab.ray_values(escape))
        if not check_ray(lp, ray):
            raise SolverInvariantError("unboundedness ray failed substitution")
        return LPOutcome(Status.UNBOUNDED, ray=ray)
    point = std.point_from(tab.struct_values())
    value = _dot(lp.objective, point)
    mults = std.row_mults_from(tab.duals())
    if not check_point(lp, point):
        raise SolverInvariantError("optimal point failed substitution")
    if not check_duals(lp, mults, value):
        raise SolverInvariantError("dual certificate failed substitution")
    return LPOutcome(
        Status.FEASIBLE,
        point=point,
        objective_value=value,
        duals=mults,
    )


def solve_strict(lp: LinearProgram, strict_rows: Sequence[int]) -> LPOutcome:
    """Decide a system with the listed inequality rows required strict.

    FEASIBLE outcomes carry a strictly feasible point and, in
    objective_value, the verified margin by which the strict rows hold.
    INFEASIBLE outcomes carry multipliers accepted by
    check_strict_emptiness.  The margin variable is capped at 1, so the
    auxiliary program is never unbounded.
    """
    _validate(lp)
    strict = sorted(set(strict_rows))
    for i in strict:
        if i < 0 or i >= len(lp.constraints):
            raise LPError(f"strict row {i} out of range")
        if lp.constraints[i].relation == EQ:
            raise LPError(f"strict row {i} is an equality")
    if not strict:
        return solve(lp)
    n = lp.num_vars
    rows = []
    for i, con in enumerate(lp.constraints):
        margin = ZERO
        if i in strict:
            margin = ONE if con.relation == LE else -ONE
        rows.append((con.coeffs + (margin,), con.relation, con.rhs))
    rows.append(((ZERO,) * n + (ONE,), LE, ONE))
    rows.append(((ZERO,) * n + (ONE,), GE, ZERO))
    aux = make_lp(n + 1, rows, objective=(ZERO,) * n + (ONE,), maximize=True)
    out = solve(aux)
    if out.status is Status.UNBOUNDED:
        raise SolverInvariantError("margin program cannot be unbounded")
    nrows = len(lp.constraints)
    if out.status is Status.INFEASIBLE:
        mults = out.farkas[:nrows]
    elif out.objective_value > 0:
        point = out.point[:n]
        if not check_point(lp, point, strict):
            raise SolverInvariantError("strict point failed substitution")
        return LPOutcome(
            Status.FEASIBLE, point=point, objective_value=out.objective_value
        )
    else:
        mults = out.duals[:nrows]
    if not check_strict_emptiness(lp, strict, mults):
        raise SolverInvariantError("strict emptiness certificate failed")
    return LPOutcome(Status.INFEASIBLE, farkas=mults)


def _validate(lp: LinearProgram):
    if not isinstance(lp, LinearProgram):
        raise LPError("expected a LinearProgram")
    if lp.num_vars < 1:
        raise LPError("num_vars must be positive")
    if not lp.constraints:
        raise LPError("a program needs at least one constraint")
    for idx, con in enumerate(lp.constraints):
        if con.relation not in _RELATIONS:
            raise LPError(f"row {idx}: unknown relation {con.relation!r}")
        if len(con.coeffs) != lp.num_vars:
            raise LPError(f"row {idx}: coefficient count mismatch")
    if lp.objective is not None and len(lp.objective) != lp.num_vars:
        raise LPError("objective length does not match num_vars")
