"""Joint antipodality of point tuples and rank-k antipodality of sets.

A (k+1)-tuple of points chosen from a finite set X is jointly antipodal
when some affine map carries conv(X) into the standard probability simplex
on k+1 outcomes while sending the chosen points to the simplex vertices.
X is antipodal of rank k when every (k+1)-subset is jointly antipodal.

Two independent decision routes are implemented and kept separate:

* the direct route searches for the affine map itself;
* the shrunk route dilates conv(X) toward each chosen point with factors
  in (0, 1) summing to k and decides whether the relative interiors of the
  k+1 shrunk copies share a point.

The routes agree on every input: empty intersection holds exactly when
the map exists.  Either way the caller gets a self-contained certificate.
A positive answer carries the map, checkable by substitution.  A negative
answer carries a witness point lying in all k+1 closed shrunk copies for
factors summing to strictly less than k, a configuration that is
impossible for jointly antipodal tuples; checking it needs only convex
hull membership.

Also provided: sequential halfspace separation for families of polytopes
with disjoint relative interiors, support halfspaces touching the other k
chosen points (derived by expanding the separating halfspaces back
through the dilations), a projection-based variant that asks every point
to project inside the chosen simplex, and a strict variant that forbids
the remaining points from landing on simplex vertices.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .exact_lp import EQ, GE, LE, Status, make_lp, solve, solve_strict
from .geometry import (
    AffineMap,
    Dilation,
    PointSet,
    Polytope,
    StandardSimplex,
    affine_rank,
    barycentric,
    dilate_polytope,
    member,
    orthogonal_project,
    vdot,
)
from .rationals import ONE, ZERO, ratio

#: Exhaustive rank checks refuse beyond this many subsets; ask for
#: sampling instead.
EXHAUSTIVE_LIMIT = 100_000


class AntipodalityError(ValueError):
    """Bad queries: index problems, factor problems, size problems."""


class NotSeparableError(AntipodalityError):
    """Sequential separation was asked for relative interiors that meet."""


class CertificateError(RuntimeError):
    """A constructed certificate failed its own re-verification."""


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class AntipodalityCertificate:
    """Outcome of a joint antipodality query on chosen indices into X.

    antipodal=True carries `mapping` with mapping(q_j) = e_j and
    mapping(x) in the simplex for all x in X.  antipodal=False carries
    `witness` and per-point `shrink_factors` in (0,1) summing to < k such
    that the witness lies in every closed copy of conv(X) shrunk toward
    the respective chosen point; jointly antipodal tuples admit no such
    point.
    """

    antipodal: bool
    chosen: tuple
    mapping: Optional[AffineMap] = None
    witness: Optional[tuple] = None
    shrink_factors: Optional[tuple] = None


@dataclass(frozen=True)
class HalfSpace:
    """The closed region normal . x <= offset."""

    normal: tuple
    offset: object

    def __post_init__(self):
        normal = tuple(ratio(c) for c in self.normal)
        if all(c == 0 for c in normal):
            raise AntipodalityError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", ratio(self.offset))

    def contains(self, x) -> bool:
        return vdot(self.normal, x) <= self.offset

    def on_boundary(self, x) -> bool:
        return vdot(self.normal, x) == self.offset


@dataclass(frozen=True)
class SupportCertificate:
    """One supporting halfspace per chosen point.

    Halfspace i contains all of X, touches every chosen point except the
    i-th on its boundary, and keeps the i-th strictly inside.  Restricted
    to the affine hull of the chosen points the halfspaces cut out exactly
    their simplex.
    """

    chosen: tuple
    shrink_factors: tuple
    halfspaces: tuple


@dataclass(frozen=True)
class RankReport:
    rank: int
    antipodal: bool
    subsets_checked: int
    exhaustive: bool
    failing: Optional[AntipodalityCertificate] = None

    @property
    def failing_subset(self):
        return None if self.failing is None else self.failing.chosen


@dataclass(frozen=True)
class ProjectionReport:
    """Projection criterion: every point of X must project into the
    simplex of each chosen (k+1)-tuple, orthogonally onto its hull."""

    rank: int
    holds: bool
    failing_subset: Optional[tuple] = None
    offender: Optional[int] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class StrictReport:
    """Strict variant: beyond joint antipodality of each (k+1)-subset,
    some certifying map must keep every other point of X off the simplex
    vertices.  `forced_pair` names (point index, vertex position) when a
    coincidence is unavoidable."""

    rank: int
    strict: bool
    subsets_checked: int
    failing_subset: Optional[tuple] = None
    cause: Optional[str] = None
    forced_pair: Optional[tuple] = None
    failing_certificate: Optional[AntipodalityCertificate] = None
    evidence: tuple = ()


# ---------------------------------------------------------------------------
# shared validation


def _validate_chosen(X: PointSet, chosen) -> tuple:
    chosen = tuple(chosen)
    if len(chosen) < 2:
        raise AntipodalityError("need at least two chosen indices")
    if len(set(chosen)) != len(chosen):
        raise AntipodalityError("chosen indices must be distinct")
    for i in chosen:
        if not isinstance(i, int) or not 0 <= i < len(X):
            raise AntipodalityError(f"index {i!r} out of range for the set")
    return chosen


def default_factors(k: int) -> tuple:
    """The symmetric choice k/(k+1) for each of the k+1 points."""
    return tuple(ratio(k, k + 1) for _ in range(k + 1))


def _validate_factors(k, factors) -> tuple:
    factors = tuple(ratio(f) for f in factors)
    if len(factors) != k + 1:
        raise AntipodalityError(f"need {k + 1} shrink factors, got {len(factors)}")
    if any(not (0 < f < 1) for f in factors):
        raise AntipodalityError("shrink factors must lie strictly in (0, 1)")
    if sum(factors, ZERO) != k:
        raise AntipodalityError("shrink factors must sum to the rank k")
    return factors


# ---------------------------------------------------------------------------
# the two decision routes


def _map_lp(X: PointSet, chosen):
    """Feasibility program for an affine map sending conv(X) into the
    simplex with the chosen points at its vertices.

    Variables are the (k+1) x (d+1) map entries, row-major, each output
    row holding d linear coefficients followed by its offset.
    """
    k = len(chosen) - 1
    d = X.dim
    nv = (k + 1) * (d + 1)

    def col(i, t):
        return i * (d + 1) + t

    rows = []
    for pos, q_idx in enumerate(chosen):
        q = X[q_idx]
        for i in range(k + 1):
            coeffs = [ZERO] * nv
            for t in range(d):
                coeffs[col(i, t)] = q[t]
            coeffs[col(i, d)] = ONE
            rows.append((tuple(coeffs), EQ, ONE if i == pos else ZERO))
    for x in X:
        for i in range(k + 1):
            coeffs = [ZERO] * nv
            for t in range(d):
                coeffs[col(i, t)] = x[t]
            coeffs[col(i, d)] = ONE
            rows.append((tuple(coeffs), GE, ZERO))
    for x in X:
        coeffs = [ZERO] * nv
        for i in range(k + 1):
            for t in range(d):
                coeffs[col(i, t)] += x[t]
            coeffs[col(i, d)] = ONE
        rows.append((tuple(coeffs), EQ, ONE))
    return make_lp(nv, rows)


def _decode_map(point, k, d) -> AffineMap:
    rows = []
    offs = []
    for i in range(k + 1):
        base = i * (d + 1)
        rows.append(tuple(point[base + t] for t in range(d)))
        offs.append(point[base + d])
    return AffineMap(tuple(rows), tuple(offs))


def _copies_lp(X: PointSet, chosen, factors):
    """Strict system: a common point of the relative interiors of the
    shrunk copies of conv(X), one copy per chosen point.

    Variables: the common point z (d of them), then convex weights over X
    for each copy.  Weight positivity rows are the strict ones.
    """
    n = len(X)
    d = X.dim
    k = len(chosen) - 1
    nv = d + (k + 1) * n

    def wcol(j, i):
        return d + j * n + i

    rows = []
    for j, q_idx in enumerate(chosen):
        lam = factors[j]
        q = X[q_idx]
        for t in range(d):
            coeffs = [ZERO] * nv
            coeffs[t] = ONE
            for i, x in enumerate(X):
                coeffs[wcol(j, i)] = -lam * x[t]
            rows.append((tuple(coeffs), EQ, (1 - lam) * q[t]))
        coeffs = [ZERO] * nv
        for i in range(n):
            coeffs[wcol(j, i)] = ONE
        rows.append((tuple(coeffs), EQ, ONE))
    strict_rows = []
    for j in range(k + 1):
        for i in range(n):
            coeffs = [ZERO] * nv
            coeffs[wcol(j, i)] = ONE
            strict_rows.append(len(rows))
            rows.append((tuple(coeffs), GE, ZERO))
    return make_lp(nv, rows), strict_rows


def _witness_from_solution(X, chosen, factors, point):
    """Convert a common relative-interior point of the shrunk copies
    (factor sum k) into the closed-copy witness form (factor sum < k).

    With z = (1 - l_j) q_j + l_j sum_i m_i x_i and all weights m positive,
    dropping the weight the copy's own center carries leaves z inside the
    copy shrunk by the smaller factor l_j (1 - m_center), and the total
    slips strictly below k.
    """
    n = len(X)
    d = X.dim
    witness = tuple(point[:d])
    reduced = []
    for j, q_idx in enumerate(chosen):
        m_center = point[d + j * n + q_idx]
        if not 0 < m_center < 1:
            raise CertificateError("interior weights must lie in (0, 1)")
        reduced.append(factors[j] * (1 - m_center))
    return witness, tuple(reduced)


def verify_joint_certificate(X: PointSet, cert: AntipodalityCertificate) -> bool:
    """Re-check a joint antipodality certificate by substitution only."""
    chosen = cert.chosen
    k = len(chosen) - 1
    if cert.antipodal:
        m = cert.mapping
        if m is None or m.in_dim != X.dim or m.out_dim != k + 1:
            return False
        simplex = StandardSimplex(k)
        for pos, q_idx in enumerate(chosen):
            if m.apply(X[q_idx]) != simplex.vertex(pos):
                return False
        return all(simplex.contains(m.apply(x)) for x in X)
    if cert.witness is None or cert.shrink_factors is None:
        return False
    factors = cert.shrink_factors
    if len(factors) != k + 1:
        return False
    if any(not (0 < f < 1) for f in factors):
        return False
    if sum(factors, ZERO) >= k:
        return False
    hull = Polytope(X)
    for j, q_idx in enumerate(chosen):
        pre = Dilation(X[q_idx], factors[j]).preimage(cert.witness)
        if not member(hull, pre).inside:
            return False
    return True


def joint_antipodal_direct(X: PointSet, chosen) -> AntipodalityCertificate:
    """Decide joint antipodality by searching for the certifying map."""
    chosen = _validate_chosen(X, chosen)
    k = len(chosen) - 1
    frame = [X[i] for i in chosen]
    if affine_rank(PointSet(tuple(frame))) == k:
        out = solve(_map_lp(X, chosen))
        if out.status is Status.FEASIBLE:
            cert = AntipodalityCertificate(
                True, chosen, mapping=_decode_map(out.point, k, X.dim)
            )
            if not verify_joint_certificate(X, cert):
                raise CertificateError("map certificate failed verification")
            return cert
    # Affinely dependent tuples can never reach the simplex vertices, and
    # an infeasible map program means the same; either way the shrunk
    # route must produce a common point to witness it.
    return _witness_certificate(X, chosen, default_factors(k))


def joint_antipodal_shrunk(
    X: PointSet, chosen, factors=None
) -> AntipodalityCertificate:
    """Decide joint antipodality through the shrunk-copy intersection."""
    chosen = _validate_chosen(X, chosen)
    k = len(chosen) - 1
    factors = default_factors(k) if factors is None else _validate_factors(k, factors)
    lp, strict_rows = _copies_lp(X, chosen, factors)
    out = solve_strict(lp, strict_rows)
    if out.status is Status.FEASIBLE:
        witness, reduced = _witness_from_solution(X, chosen, factors, out.point)
        cert = AntipodalityCertificate(
            False, chosen, witness=witness, shrink_factors=reduced
        )
        if not verify_joint_certificate(X, cert):
            raise CertificateError("witness certificate failed verification")
        return cert
    # Empty intersection: the certifying map must exist; fetch it from the
    # direct program so the negative route still hands out a positive
    # certificate.
    map_out = solve(_map_lp(X, chosen))
    if map_out.status is not Status.FEASIBLE:
        raise CertificateError(
            "decision routes disagree: empty shrunk intersection but no map"
        )
    cert = AntipodalityCertificate(
        True, chosen, mapping=_decode_map(map_out.point, k, X.dim)
    )
    if not verify_joint_certificate(X, cert):
        raise CertificateError("map certificate failed verification")
    return cert


def _witness_certificate(X, chosen, factors) -> AntipodalityCertificate:
    lp, strict_rows = _copies_lp(X, chosen, factors)
    out = solve_strict(lp, strict_rows)
    if out.status is not Status.FEASIBLE:
        raise CertificateError(
            "decision routes disagree: no map yet empty shrunk intersection"
        )
    witness, reduced = _witness_from_solution(X, chosen, factors, out.point)
    cert = AntipodalityCertificate(
        False, chosen, witness=witness, shrink_factors=reduced
    )
    if not verify_joint_certificate(X, cert):
        raise CertificateError("witness certificate failed verification")
    return cert


# ---------------------------------------------------------------------------
# rank-k decision


def _rank_preconditions(X: PointSet, k: int):
    if not isinstance(k, int) or k < 1:
        raise AntipodalityError("rank must be a positive integer")
    if len(X) < k + 1:
        raise AntipodalityError(
            f"rank {k} needs at least {k + 1} points, the set has {len(X)}"
        )
    rank = affine_rank(X)
    if k > rank:
        raise AntipodalityError(
            f"rank {k} exceeds the affine rank {rank} of the set"
        )


def _sampled_subsets(n, k, samples, seed):
    rng = random.Random(seed)
    seen = set()
    for _ in range(samples):
        seen.add(tuple(sorted(rng.sample(range(n), k + 1))))
    return sorted(seen)


def is_rank_k_antipodal(
    X: PointSet,
    k: int,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    threads: int = 1,
) -> RankReport:
    """Check every (or a seeded sample of) (k+1)-subset for joint
    antipodality; the first failing subset in index order is reported.

    Exhaustive mode refuses sets with more than EXHAUSTIVE_LIMIT subsets;
    pass `samples` (a number of random draws, deduplicated) and `seed`.
    `threads` only parallelises the subset checks; reports are identical
    for every thread count.
    """
    _rank_preconditions(X, k)
    n = len(X)
    total = comb(n, k + 1)
    if samples is None:
        if total > EXHAUSTIVE_LIMIT:
            raise AntipodalityError(
                f"{total} subsets exceed the exhaustive limit "
                f"{EXHAUSTIVE_LIMIT}; pass samples= and seed="
            )
        subsets = list(combinations(range(n), k + 1))
        exhaustive = True
    else:
        if not isinstance(samples, int) or samples < 1:
            raise AntipodalityError("samples must be a positive integer")
        if seed is None:
            raise AntipodalityError("sampled mode requires an explicit seed")
        subsets = _sampled_subsets(n, k, samples, seed)
        exhaustive = False
    if not isinstance(threads, int) or threads < 1:
        raise AntipodalityError("threads must be a positive integer")

    def check(subset):
        return joint_antipodal_direct(X, subset)

    if threads == 1:
        for pos, subset in enumerate(subsets):
            cert = check(subset)
            if not cert.antipodal:
                return RankReport(k, False, pos + 1, exhaustive, failing=cert)
        return RankReport(k, True, len(subsets), exhaustive)
    chunk = 8 * threads
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start in range(0, len(subsets), chunk):
            batch = subsets[start : start + chunk]
            for offset, cert in enumerate(pool.map(check, batch)):
                if not cert.antipodal:
                    return RankReport(
                        k, False, start + offset + 1, exhaustive, failing=cert
                    )
    return RankReport(k, True, len(subsets), exhaustive)


# ---------------------------------------------------------------------------
# sequential halfspace separation


def _separation_step(polys, halfspaces, i, p):
    """Strict system for step i: a point interior (in weights) to poly i,
    inside every later polytope, inside every halfspace found so far."""
    d = polys[0].dim
    sizes = [len(q.spanning) for q in polys]
    later = list(range(i, len(polys)))
    nv = d + sum(sizes[j] for j in later)
    offsets = {}
    pos = d
    for j in later:
        offsets[j] = pos
        pos += sizes[j]
    rows = []
    coord_rows = {}
    sum_rows = {}
    strict_rows = []
    for j in later:
        pts = polys[j].spanning
        coord_rows[j] = len(rows)
        for t in range(d):
            coeffs = [ZERO] * nv
            coeffs[t] = ONE
            for a, u in enumerate(pts):
                coeffs[offsets[j] + a] = -u[t]
            rows.append((tuple(coeffs), EQ, ZERO))
        sum_rows[j] = len(rows)
        coeffs = [ZERO] * nv
        for a in range(len(pts)):
            coeffs[offsets[j] + a] = ONE
        rows.append((tuple(coeffs), EQ, ONE))
        for a in range(len(pts)):
            coeffs = [ZERO] * nv
            coeffs[offsets[j] + a] = ONE
            if j == i:
                strict_rows.append(len(rows))
            rows.append((tuple(coeffs), GE, ZERO))
    for hs in halfspaces:
        coeffs = list(hs.normal) + [ZERO] * (nv - d)
        rows.append((tuple(coeffs), LE, hs.offset))
    lp = make_lp(nv, rows)
    out = solve_strict(lp, strict_rows)
    if out.status is Status.FEASIBLE:
        return None
    w = out.farkas
    normal = tuple(w[coord_rows[i] + t] for t in range(d))
    offset = w[sum_rows[i]]
    if all(c == 0 for c in normal):
        raise CertificateError("separation produced a degenerate functional")
    hs = HalfSpace(normal, offset)
    for u in polys[i].spanning:
        if not hs.contains(u):
            raise CertificateError("separating halfspace misses its polytope")
    if not hs.on_boundary(p):
        raise CertificateError("separating halfspace is not tight at the point")
    return hs


def sequential_separation(polys: Sequence[Polytope], p) -> tuple:
    """Halfspaces D_i with poly_i inside D_i, the common point p on every
    boundary, and the interiors of the D_i mutually exclusive.

    Requires the relative interiors of the polytopes to have empty total
    intersection while p belongs to every polytope.  Intended for
    full-dimensional polytopes; a lower-dimensional family can make an
    intermediate step unresolvable, which raises CertificateError.
    """
    if not polys:
        raise AntipodalityError("need at least one polytope")
    d = polys[0].dim
    p = tuple(ratio(c) for c in p)
    if len(p) != d:
        raise AntipodalityError("point dimension does not match the polytopes")
    for q in polys:
        if q.dim != d:
            raise AntipodalityError("polytopes live in different dimensions")
        if not member(q, p).inside:
            raise AntipodalityError("the common point must lie in every polytope")
    halfspaces = []
    for i in range(len(polys)):
        hs = _separation_step(polys, halfspaces, i, p)
        if hs is None:
            if i == 0:
                raise NotSeparableError(
                    "the relative interiors share a point; nothing to separate"
                )
            raise CertificateError(
                "separation stalled; a lower-dimensional polytope is in the way"
            )
        halfspaces.append(hs)
    # The construction guarantees no point is strictly inside all of them;
    # re-check exactly.
    rows = [(hs.normal, LE, hs.offset) for hs in halfspaces]
    probe = make_lp(d, rows)
    if solve_strict(probe, range(len(rows))).status is not Status.INFEASIBLE:
        raise CertificateError("separating halfspaces fail joint exclusivity")
    return tuple(halfspaces)


# ---------------------------------------------------------------------------
# support halfspaces for antipodal tuples


def _expand_halfspace(hs: HalfSpace, q, lam) -> HalfSpace:
    # Pull the halfspace back through the dilation toward q by factor lam:
    # n.((1-lam) q + lam y) <= c  iff  n.y <= (c - (1-lam) n.q) / lam.
    c = (hs.offset - (1 - lam) * vdot(hs.normal, q)) / lam
    return HalfSpace(hs.normal, c)


def _map_route_halfspaces(X, chosen, factors, mapping, p):
    """Halfspaces straight from the certifying map: copy i is contained in
    the region where output coordinate i stays at least 1 - factor.

    Needs X to span its space, which makes the output coordinates sum to 1
    everywhere and hence the strict intersection empty.
    """
    halfspaces = []
    for i in range(len(chosen)):
        normal = tuple(-a for a in mapping.matrix[i])
        offset = mapping.offset[i] - (1 - factors[i])
        hs = HalfSpace(normal, offset)
        if not hs.on_boundary(p):
            raise CertificateError("map-derived halfspace is not tight")
        halfspaces.append(hs)
    return tuple(halfspaces)


def verify_support_certificate(X: PointSet, cert: SupportCertificate) -> bool:
    """Re-check support halfspaces: containment of X, the boundary touch
    at every other chosen point, strict slack at the own point."""
    chosen = cert.chosen
    if len(cert.halfspaces) != len(chosen):
        return False
    for i, hs in enumerate(cert.halfspaces):
        if not all(hs.contains(x) for x in X):
            return False
        for j, q_idx in enumerate(chosen):
            q = X[q_idx]
            if j == i:
                if vdot(hs.normal, q) >= hs.offset:
                    return False
            elif not hs.on_boundary(q):
                return False
    return True


def support_certificate(
    X: PointSet, chosen, factors=None
) -> SupportCertificate:
    """Supporting halfspaces witnessing joint antipodality geometrically.

    For each chosen point, a halfspace containing all of X whose boundary
    passes through the other k chosen points; restricted to the affine
    hull of the chosen points the k+1 boundaries cut out exactly their
    simplex.  Derived by separating the shrunk copies at their common
    boundary point and expanding each halfspace back through its dilation.

    X must span its ambient space; the chosen tuple must be jointly
    antipodal.
    """
    chosen = _validate_chosen(X, chosen)
    k = len(chosen) - 1
    factors = default_factors(k) if factors is None else _validate_factors(k, factors)
    if affine_rank(X) != X.dim:
        raise AntipodalityError(
            "support halfspaces need a set spanning its space; "
            "work inside the affine hull first"
        )
    base_cert = joint_antipodal_direct(X, chosen)
    if not base_cert.antipodal:
        raise AntipodalityError("the chosen points are not jointly antipodal")
    p = None
    for j, q_idx in enumerate(chosen):
        term = tuple((1 - factors[j]) * c for c in X[q_idx])
        p = term if p is None else tuple(a + b for a, b in zip(p, term))
    hull = Polytope(X)
    copies = [
        dilate_polytope(Dilation(X[q_idx], factors[j]), hull)
        for j, q_idx in enumerate(chosen)
    ]

    def expanded_cert(halfspaces):
        expanded = tuple(
            _expand_halfspace(hs, X[q_idx], factors[j])
            for (j, q_idx), hs in zip(enumerate(chosen), halfspaces)
        )
        cert = SupportCertificate(chosen, factors, expanded)
        return cert if verify_support_certificate(X, cert) else None

    # Separation can pick a degenerate supporting functional (one whose
    # expansion also passes through the tuple's own point); the halfspaces
    # read off the certifying map never degenerate, so fall back to them.
    try:
        cert = expanded_cert(sequential_separation(copies, p))
    except CertificateError:
        cert = None
    if cert is None:
        cert = expanded_cert(
            _map_route_halfspaces(X, chosen, factors, base_cert.mapping, p)
        )
    if cert is None:
        raise CertificateError(
            "support halfspaces degenerate for this tuple and factors"
        )
    return cert


# ---------------------------------------------------------------------------
# projection criterion


def erdos_rank_k(X: PointSet, k: int) -> ProjectionReport:
    """Orthogonal-projection criterion over every (k+1)-subset.

    Each subset must be affinely independent and every point of X must
    project onto the subset's affine hull with nonnegative barycentric
    coordinates, landing inside the subset's simplex.  This is stronger
    than rank-k antipodality: the supporting slabs here are orthogonal.
    """
    _rank_preconditions(X, k)
    for subset in combinations(range(len(X)), k + 1):
        frame = PointSet(tuple(X[i] for i in subset))
        if affine_rank(frame) != k:
            return ProjectionReport(k, False, subset, reason="dependent")
        images = orthogonal_project(X, frame)
        for idx, image in enumerate(images):
            coords = barycentric(frame, image)
            if any(c < 0 for c in coords):
                return ProjectionReport(
                    k, False, subset, offender=idx, reason="outside"
                )
    return ProjectionReport(k, True)


# ---------------------------------------------------------------------------
# strict variant


def _vertex_value_lp(X, chosen, x_idx, vertex_pos):
    """Minimise output coordinate vertex_pos at point x_idx over all
    certifying maps for the chosen tuple."""
    lp = _map_lp(X, chosen)
    d = X.dim
    k = len(chosen) - 1
    nv = (k + 1) * (d + 1)
    objective = [ZERO] * nv
    base = vertex_pos * (d + 1)
    x = X[x_idx]
    for t in range(d):
        objective[base + t] = x[t]
    objective[base + d] = ONE
    return make_lp(
        nv,
        [(c.coeffs, c.relation, c.rhs) for c in lp.constraints],
        objective=tuple(objective),
        maximize=False,
    )


def _blend_maps(m1: AffineMap, m2: AffineMap) -> AffineMap:
    half = ratio(1, 2)
    matrix = tuple(
        tuple(half * a + half * b for a, b in zip(r1, r2))
        for r1, r2 in zip(m1.matrix, m2.matrix)
    )
    offset = tuple(half * a + half * b for a, b in zip(m1.offset, m2.offset))
    return AffineMap(matrix, offset)


def strict_rank_k(X: PointSet, k: int) -> StrictReport:
    """Rank-k antipodality with vertex coincidences forbidden.

    For every (k+1)-subset there must be a certifying map under which no
    other point of X lands on a simplex vertex.  Since the certifying
    maps form a convex set and each vertex coordinate is linear in the
    map, a coincidence is unavoidable exactly when the coordinate's
    minimum over all certifying maps is 1; averaging per-pair minimisers
    into one map yields the returned evidence.

    With exactly k+1 points the condition is vacuous beyond plain joint
    antipodality.
    """
    _rank_preconditions(X, k)
    n = len(X)
    subsets = list(combinations(range(n), k + 1))
    evidence = []
    for pos, subset in enumerate(subsets):
        cert = joint_antipodal_direct(X, subset)
        if not cert.antipodal:
            return StrictReport(
                k,
                False,
                pos + 1,
                failing_subset=subset,
                cause="not_antipodal",
                failing_certificate=cert,
            )
        mapping = cert.mapping
        others = [i for i in range(n) if i not in subset]
        for x_idx in others:
            for vertex_pos in range(k + 1):
                value = mapping.apply(X[x_idx])[vertex_pos]
                if value != 1:
                    continue
                out = solve(_vertex_value_lp(X, subset, x_idx, vertex_pos))
                if out.status is not Status.FEASIBLE:
                    raise CertificateError("vertex-value program went infeasible")
                if out.objective_value == 1:
                    return StrictReport(
                        k,
                        False,
                        pos + 1,
                        failing_subset=subset,
                        cause="forced",
                        forced_pair=(x_idx, vertex_pos),
                    )
                deviator = _decode_map(out.point, k, X.dim)
                mapping = _blend_maps(mapping, deviator)
        witness_cert = AntipodalityCertificate(True, subset, mapping=mapping)
        if not verify_joint_certificate(X, witness_cert):
            raise CertificateError("blended evidence map failed verification")
        for x_idx in others:
            image = mapping.apply(X[x_idx])
            if any(c == 1 for c in image):
                raise CertificateError("blended evidence map still coincides")
        evidence.append((subset, mapping))
    return StrictReport(k, True, len(subsets), evidence=tuple(evidence))
