"""Exact convex geometry in V-representation.

Points are tuples of exact rationals.  Polytopes are given by spanning
points (not necessarily vertices); membership, relative-interior
membership, barycentric coordinates, affine rank, orthogonal projection
onto an affine hull, and exact volume in low dimension are all decided in
rational arithmetic.  Membership queries answer with a certificate either
way: convex coefficients inside, a separating affine functional outside.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from math import factorial
from typing import Optional

from .exact_lp import EQ, GE, Status, make_lp, solve, solve_strict
from .rationals import ONE, ZERO, ratio

#: Exact volume is supported up to this ambient dimension by default; the
#: facet enumeration below scans every d-subset of the spanning points and
#: gets expensive quickly.
VOLUME_DIM_CAP = 4


class GeometryError(ValueError):
    """Dimension mismatches, degenerate inputs, broken preconditions."""


class DegenerateVolumeWarning(UserWarning):
    """Volume was requested for a set that does not span its space."""


def as_point(coords) -> tuple:
    return tuple(ratio(c) for c in coords)


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vscale(s, a):
    return tuple(s * x for x in a)


def vdot(a, b):
    total = ZERO
    for x, y in zip(a, b):
        total += x * y
    return total


@dataclass(frozen=True)
class PointSet:
    """Finite list of pairwise distinct points in a common dimension."""

    points: tuple

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        if not pts:
            raise GeometryError("a point set needs at least one point")
        dim = len(pts[0])
        if dim == 0:
            raise GeometryError("points need at least one coordinate")
        if any(len(p) != dim for p in pts):
            raise GeometryError("points have mixed dimensions")
        if len(set(pts)) != len(pts):
            raise GeometryError("points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, idx):
        return self.points[idx]


@dataclass(frozen=True)
class Polytope:
    """Convex hull of spanning points; no facet structure is maintained."""

    spanning: PointSet

    @classmethod
    def from_points(cls, points) -> "Polytope":
        return cls(PointSet(tuple(points)))

    @property
    def dim(self) -> int:
        return self.spanning.dim


@dataclass(frozen=True)
class Dilation:
    """x maps to (1 - factor) * center + factor * x, factor in (0, 1]."""

    center: tuple
    factor: object

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        factor = ratio(self.factor)
        if not (0 < factor <= 1):
            raise GeometryError("dilation factor must lie in (0, 1]")
        object.__setattr__(self, "factor", factor)

    def apply(self, x) -> tuple:
        lam = self.factor
        return tuple(
            (1 - lam) * c + lam * v for c, v in zip(self.center, as_point(x))
        )

    def preimage(self, y) -> tuple:
        lam = self.factor
        return tuple(
            (v - (1 - lam) * c) / lam for c, v in zip(self.center, as_point(y))
        )


def dilate(dilation: Dilation, x) -> tuple:
    return dilation.apply(x)


def dilate_polytope(dilation: Dilation, poly: Polytope) -> Polytope:
    return Polytope.from_points(dilation.apply(p) for p in poly.spanning)


@dataclass(frozen=True)
class StandardSimplex:
    """Probability simplex on rank + 1 outcomes, embedded in R^(rank+1)."""

    rank: int

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise GeometryError("simplex rank must be a positive integer")

    @property
    def dim(self) -> int:
        return self.rank + 1

    def vertex(self, j) -> tuple:
        if not 0 <= j <= self.rank:
            raise GeometryError("vertex index out of range")
        return tuple(ONE if i == j else ZERO for i in range(self.rank + 1))

    @property
    def vertices(self) -> PointSet:
        return PointSet(tuple(self.vertex(j) for j in range(self.rank + 1)))

    def contains(self, p, strict=False) -> bool:
        p = as_point(p)
        if len(p) != self.rank + 1:
            return False
        if sum(p, ZERO) != 1:
            return False
        return all(c > 0 for c in p) if strict else all(c >= 0 for c in p)


@dataclass(frozen=True)
class AffineMap:
    """x maps to matrix @ x + offset, rows indexed by output coordinate."""

    matrix: tuple
    offset: tuple

    def __post_init__(self):
        rows = tuple(as_point(r) for r in self.matrix)
        off = as_point(self.offset)
        if not rows:
            raise GeometryError("affine map needs at least one output row")
        if len({len(r) for r in rows}) != 1:
            raise GeometryError("matrix rows have mixed lengths")
        if len(off) != len(rows):
            raise GeometryError("offset length must match the row count")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "offset", off)

    @property
    def in_dim(self) -> int:
        return len(self.matrix[0])

    @property
    def out_dim(self) -> int:
        return len(self.matrix)

    def apply(self, x) -> tuple:
        x = as_point(x)
        if len(x) != self.in_dim:
            raise GeometryError("point dimension does not match the map")
        return tuple(vdot(row, x) + c for row, c in zip(self.matrix, self.offset))


# ---------------------------------------------------------------------------
# exact linear algebra (dense, small)


def _row_echelon(rows):
    """In-place fraction-free-ish Gauss; returns pivot column list."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = ONE / mat[r][c]
        mat[r] = [a * inv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def matrix_rank(rows) -> int:
    rows = [list(map(ratio, r)) for r in rows]
    if not rows:
        return 0
    _, pivots = _row_echelon(rows)
    return len(pivots)


def solve_unique(rows, rhs):
    """Solve a square-rank linear system with a unique solution.

    Raises GeometryError when the matrix is rank-deficient or the system
    inconsistent; callers use this only where uniqueness is guaranteed.
    """
    aug = [list(map(ratio, r)) + [ratio(b)] for r, b in zip(rows, rhs)]
    ncols = len(aug[0]) - 1
    mat, pivots = _row_echelon(aug)
    if ncols in pivots:
        raise GeometryError("inconsistent linear system")
    if len(pivots) != ncols:
        raise GeometryError("linear system is rank-deficient")
    solution = [ZERO] * ncols
    for r, c in enumerate(pivots):
        solution[c] = mat[r][-1]
    return tuple(solution)


def nullspace_vector(rows, ncols):
    """One nonzero vector killed by all rows; needs corank exactly one."""
    mat, pivots = _row_echelon([list(map(ratio, r)) for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        raise GeometryError("nullspace is not one-dimensional")
    f = free[0]
    vec = [ZERO] * ncols
    vec[f] = ONE
    for r, c in enumerate(pivots):
        vec[c] = -mat[r][f]
    return tuple(vec)


def affine_rank(ps: PointSet) -> int:
    """Dimension of the affine hull (0 for a single point)."""
    base = ps[0]
    diffs = [vsub(p, base) for p in ps.points[1:]]
    if not diffs:
        return 0
    return matrix_rank(diffs)


def barycentric(vertices: PointSet, x) -> tuple:
    """Coordinates of x in an affinely independent frame, summing to 1.

    Coordinates may be negative when x lies outside the hull; the frame
    must be affinely independent and x must lie in its affine hull.
    """
    x = as_point(x)
    if len(x) != vertices.dim:
        raise GeometryError("point dimension does not match the frame")
    n = len(vertices)
    if affine_rank(vertices) != n - 1:
        raise GeometryError("frame is affinely dependent")
    rows = [[p[t] for p in vertices] for t in range(vertices.dim)]
    rows.append([ONE] * n)
    rhs = list(x) + [ONE]
    # Overdetermined but consistent iff x lies in the affine hull; reduce
    # through the LP-free Gauss path by solving on a row-selected square
    # system and verifying the rest.
    aug = [row + [b] for row, b in zip(rows, rhs)]
    mat, pivots = _row_echelon(aug)
    if n in pivots:
        raise GeometryError("point lies outside the affine hull of the frame")
    coords = [ZERO] * n
    for r, c in enumerate(pivots):
        coords[c] = mat[r][-1]
    # Substitution check guards the rank-deficient-free assumption.
    for row, b in zip(rows, rhs):
        if vdot(row, coords) != b:
            raise GeometryError("point lies outside the affine hull of the frame")
    return tuple(coords)


# ---------------------------------------------------------------------------
# membership with certificates


@dataclass(frozen=True)
class Membership:
    """Verdict plus certificate for a hull membership query.

    Inside: convex coefficients over the spanning points (positive on every
    point for relative-interior queries over the affine hull).  Outside: an
    affine functional with normal.x > threshold while normal.p <= threshold
    on the hull (equality everywhere only in the relative-interior case,
    where the functional exposes a proper face through x).
    """

    inside: bool
    coefficients: Optional[tuple] = None
    normal: Optional[tuple] = None
    threshold: Optional[object] = None


def member(poly: Polytope, x, strict: bool = False) -> Membership:
    """Decide x in conv(spanning); strict decides x in the relative
    interior (all convex coefficients positive)."""
    x = as_point(x)
    if len(x) != poly.dim:
        raise GeometryError("point dimension does not match the polytope")
    pts = poly.spanning
    n = len(pts)
    d = poly.dim
    rows = []
    for t in range(d):
        rows.append((tuple(p[t] for p in pts), EQ, x[t]))
    rows.append(((ONE,) * n, EQ, ONE))
    nonneg_start = len(rows)
    for i in range(n):
        coeffs = tuple(ONE if j == i else ZERO for j in range(n))
        rows.append((coeffs, GE, ZERO))
    lp = make_lp(n, rows)
    if strict:
        out = solve_strict(lp, range(nonneg_start, nonneg_start + n))
    else:
        out = solve(lp)
    if out.status is Status.FEASIBLE:
        return Membership(True, coefficients=out.point)
    # Farkas multipliers on the coordinate rows give the separating
    # functional: y.x - t > 0 while y.p - t <= 0 for all spanning p.
    y = out.farkas
    normal = tuple(-y[t] for t in range(d))
    threshold = y[d]
    for p in pts:
        if vdot(normal, p) > threshold:
            raise GeometryError("separating functional failed verification")
    margin = vdot(normal, x) - threshold
    if strict:
        if margin < 0:
            raise GeometryError("separating functional failed verification")
    elif margin <= 0:
        raise GeometryError("separating functional failed verification")
    return Membership(False, normal=normal, threshold=threshold)


def orthogonal_project(ps: PointSet, frame: PointSet):
    """Project every point of ps orthogonally onto the affine hull of the
    frame; the frame must be affinely independent.

    Returns a tuple of points aligned with ps (projections of distinct
    points may coincide, so the result is not a PointSet).
    """
    if ps.dim != frame.dim:
        raise GeometryError("point set and frame dimensions differ")
    if affine_rank(frame) != len(frame) - 1:
        raise GeometryError("projection frame is affinely dependent")
    base = frame[0]
    basis = [vsub(p, base) for p in frame.points[1:]]
    out = []
    if not basis:
        return tuple(base for _ in ps)
    gram = [[vdot(u, v) for v in basis] for u in basis]
    for p in ps:
        rhs = [vdot(u, vsub(p, base)) for u in basis]
        coeffs = solve_unique(gram, rhs)
        proj = base
        for c, u in zip(coeffs, basis):
            proj = vadd(proj, vscale(c, u))
        out.append(proj)
    return tuple(out)


# ---------------------------------------------------------------------------
# exact volume in low dimension


def _supporting_facets(pts, d):
    """All supporting hyperplanes spanned by input points, as
    (inward-normal, offset, incident-index-tuple) triples with n.x >= c
    inside.  Brute force over d-subsets; fine for the supported scale."""
    n = len(pts)
    facets = {}
    for subset in combinations(range(n), d):
        base = pts[subset[0]]
        diffs = [vsub(pts[i], base) for i in subset[1:]]
        if matrix_rank(diffs) != d - 1:
            continue
        try:
            normal = nullspace_vector(diffs, d)
        except GeometryError:
            continue
        offset = vdot(normal, base)
        sides = [vdot(normal, p) - offset for p in pts]
        if all(s >= 0 for s in sides):
            pass
        elif all(s <= 0 for s in sides):
            normal = vscale(-ONE, normal)
            offset = -offset
            sides = [-s for s in sides]
        else:
            continue
        # Canonical scaling so coinciding hyperplanes dedupe.
        lead = next(c for c in normal if c != 0)
        scale = ONE / lead if lead > 0 else -ONE / lead
        key = (vscale(scale, normal), scale * offset)
        if key not in facets:
            incident = tuple(i for i, s in enumerate(sides) if s == 0)
            facets[key] = incident
    return [(k[0], k[1], v) for k, v in sorted(facets.items())]


def _affine_frame(pts):
    """Exact affine frame of the hull of pts: base point, orthogonal-free
    basis of difference vectors, and the coordinates of every input point
    in that frame.  Arbitrary frame coordinates lift back through
    base + sum(c_i * basis_i)."""
    base = pts[0]
    diffs = [vsub(p, base) for p in pts[1:]]
    rank = matrix_rank(diffs)
    # Pick a maximal independent subset of difference vectors as the basis.
    basis = []
    for dvec in diffs:
        if matrix_rank(basis + [dvec]) > len(basis):
            basis.append(list(dvec))
        if len(basis) == rank:
            break
    gram = [[vdot(u, v) for v in basis] for u in basis]
    coords = []
    for p in pts:
        rhs = [vdot(u, vsub(p, base)) for u in basis]
        coords.append(solve_unique(gram, rhs))
    return base, basis, coords


def _lift(base, basis, local):
    out = base
    for c, u in zip(local, basis):
        out = vadd(out, vscale(c, u))
    return out


def _simplices(pts, d):
    """Triangulate conv(pts), assumed full-dimensional in R^d, into a list
    of (d+1)-tuples of points: facet triangulations coned to the centroid.

    Cells may contain constructed points (facet centroids), not only input
    points, so recursion lifts cells through exact affine frames."""
    if d == 1:
        lo = min(pts)
        hi = max(pts)
        return [(lo, hi)]
    n = len(pts)
    centroid = tuple(
        sum((p[t] for p in pts), ZERO) / n for t in range(len(pts[0]))
    )
    simplices = []
    for _, _, incident in _supporting_facets(pts, d):
        face_pts = [pts[i] for i in incident]
        base, basis, flat = _affine_frame(face_pts)
        for cell in _simplices(flat, d - 1):
            lifted = tuple(_lift(base, basis, c) for c in cell)
            simplices.append(lifted + (centroid,))
    return simplices


def _det(rows):
    mat = [list(r) for r in rows]
    n = len(mat)
    det = ONE
    for c in range(n):
        pivot = None
        for r in range(c, n):
            if mat[r][c] != 0:
                pivot = r
                break
        if pivot is None:
            return ZERO
        if pivot != c:
            mat[c], mat[pivot] = mat[pivot], mat[c]
            det = -det
        det *= mat[c][c]
        inv = ONE / mat[c][c]
        for r in range(c + 1, n):
            if mat[r][c] != 0:
                f = mat[r][c] * inv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[c])]
    return det


def volume(poly: Polytope, dim_cap: int = VOLUME_DIM_CAP):
    """Exact d-volume of the hull in its ambient dimension d.

    Degenerate inputs (affine rank below d) warn and return 0.  Dimensions
    above dim_cap raise, because facet enumeration is brute force.
    """
    d = poly.dim
    if d > dim_cap:
        raise GeometryError(
            f"exact volume is supported up to dimension {dim_cap}"
        )
    pts = list(poly.spanning)
    if affine_rank(poly.spanning) < d:
        warnings.warn(
            "volume of a lower-dimensional set is zero",
            DegenerateVolumeWarning,
            stacklevel=2,
        )
        return ZERO
    if d == 1:
        coords = [p[0] for p in pts]
        return max(coords) - min(coords)
    total = ZERO
    for cell in _simplices(pts, d):
        apex = cell[-1]
        rows = [vsub(v, apex) for v in cell[:-1]]
        det = _det(rows)
        total += det if det >= 0 else -det
    return total / factorial(d)


# ---------------------------------------------------------------------------
# point-set file format


def point_set_to_obj(ps: PointSet) -> dict:
    from .rationals import ratio_str

    return {
        "dim": ps.dim,
        "points": [[ratio_str(c) for c in p] for p in ps.points],
    }


def point_set_from_obj(obj) -> PointSet:
    if not isinstance(obj, dict):
        raise GeometryError("point set document must be an object")
    for field in ("dim", "points"):
        if field not in obj:
            raise GeometryError(f"point set document lacks the {field!r} field")
    dim = obj["dim"]
    rows = obj["points"]
    if not isinstance(dim, int) or dim < 1:
        raise GeometryError("field 'dim' must be a positive integer")
    if not isinstance(rows, list) or not rows:
        raise GeometryError("field 'points' must be a non-empty list")
    pts = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise GeometryError(
                f"point {i} must be a list of {dim} rational strings"
            )
        try:
            pts.append(as_point(row))
        except ValueError as exc:
            raise GeometryError(f"point {i}: {exc}") from exc
    try:
        return PointSet(tuple(pts))
    except GeometryError as exc:
        raise GeometryError(f"invalid point set: {exc}") from exc


def load_point_set(path) -> PointSet:
    import json

    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GeometryError(f"{path}: not valid JSON ({exc})") from exc
    return point_set_from_obj(obj)


def dump_point_set(ps: PointSet, path):
    import json

    with open(path, "w", encoding="utf-8") as fh:
        json.dump(point_set_to_obj(ps), fh, indent=2, sort_keys=True)
        fh.write("\n")
