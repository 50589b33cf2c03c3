"""Building larger antipodal sets from smaller ones.

A rank-k antipodal base of size b in dimension d0, combined with an
order-(k+1) hash code of length m over b symbols, concatenates into a
rank-k antipodal set in dimension m*d0 with one point per word.  The
separating coordinate of any k+1 words hands over a ready-made
certificate.  Alongside the construction live the exact size bound
k*((k+1)/k)^d, the shrunk-copy volume inequality behind it, and the
growth-rate gap between the two.
"""

from __future__ import annotations

from dataclasses import dataclass

from .antipodality import (
    AntipodalityCertificate,
    is_rank_k_antipodal,
    joint_antipodal_direct,
    verify_joint_certificate,
)
from .geometry import (
    VOLUME_DIM_CAP,
    AffineMap,
    Dilation,
    PointSet,
    Polytope,
    affine_rank,
    volume,
)
from .hashcodes import HashCode, rate_bounds
from .rationals import LogRatio, is_integer_ratio, ratio

__all__ = [
    "ConstructionError",
    "GapReport",
    "ProductSet",
    "StartingConfig",
    "VolumeReport",
    "gap_analysis",
    "product_construct",
    "projection_certificate",
    "size_bound",
    "volume_inequality_check",
]


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class StartingConfig:
    """Base point set with a certified antipodality rank.

    Construction runs the full rank check unless trusted=True, which
    only validates shapes (for bases certified elsewhere).
    """

    points: PointSet
    rank: int
    trusted: bool = False

    def __post_init__(self):
        if not isinstance(self.rank, int) or isinstance(self.rank, bool):
            raise ConstructionError("rank: expected an integer")
        if self.rank < 1:
            raise ConstructionError("rank: must be at least 1")
        if len(self.points) < self.rank + 1:
            raise ConstructionError("points: need at least rank + 1 of them")
        if not self.trusted:
            report = is_rank_k_antipodal(self.points, self.rank)
            if not report.antipodal:
                raise ConstructionError(
                    f"points: not rank-{self.rank} antipodal, "
                    f"subset {report.failing_subset} fails"
                )

    @property
    def b(self) -> int:
        return len(self.points)

    @property
    def d0(self) -> int:
        return self.points.dim


@dataclass(frozen=True)
class ProductSet:
    base: StartingConfig
    code: HashCode
    result: PointSet


def product_construct(base: StartingConfig, code: HashCode) -> ProductSet:
    """One point per code word: blocks of the word's base points, in order."""
    if code.b != base.b:
        raise ConstructionError(
            f"code alphabet {code.b} does not match base size {base.b}"
        )
    if code.k != base.rank + 1:
        raise ConstructionError(
            f"code order {code.k} does not match base rank {base.rank} + 1"
        )
    if not code.words:
        raise ConstructionError("code has no words")
    rows = []
    for word in code.words:
        point: tuple = ()
        for sym in word:
            point = point + base.points[sym - 1]
        rows.append(point)
    return ProductSet(base=base, code=code, result=PointSet(tuple(rows)))


def projection_certificate(prod: ProductSet, chosen: tuple):
    """Certify joint antipodality of chosen product points by projection.

    Returns (certificate, coordinate): the words' separating coordinate
    selects one d0-block; the base map for the points appearing there,
    read through that block, is a valid map for the whole product set.
    """
    k = prod.base.rank
    words = prod.code.words
    if len(chosen) != k + 1 or len(set(chosen)) != len(chosen):
        raise ConstructionError("chosen: need k+1 distinct word indices")
    if any(not (0 <= i < len(words)) for i in chosen):
        raise ConstructionError("chosen: index out of range")
    picked = [words[i] for i in chosen]
    coord = next(
        (
            j
            for j in range(prod.code.m)
            if len({w[j] for w in picked}) == k + 1
        ),
        None,
    )
    if coord is None:
        raise ConstructionError("chosen words share no separating coordinate")
    base_chosen = tuple(w[coord] - 1 for w in picked)
    base_cert = joint_antipodal_direct(prod.base.points, base_chosen)
    if not base_cert.antipodal:
        raise ConstructionError("base points at the separating coordinate fail")
    d0 = prod.base.d0
    width = prod.code.m * d0
    lo = coord * d0
    matrix = tuple(
        tuple(ratio(0) for _ in range(lo))
        + row
        + tuple(ratio(0) for _ in range(width - lo - d0))
        for row in base_cert.mapping.matrix
    )
    cert = AntipodalityCertificate(
        antipodal=True,
        chosen=tuple(chosen),
        mapping=AffineMap(matrix, base_cert.mapping.offset),
    )
    if not verify_joint_certificate(prod.result, cert):
        raise ConstructionError("projected certificate failed verification")
    return cert, coord


def size_bound(d: int, k: int):
    """Exact ceiling k*((k+1)/k)^d on rank-k antipodal sets in dimension d.

    Callers floor it for integer caps; it is rarely an integer itself.
    """
    for label, value in (("d", d), ("k", k)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConstructionError(f"{label}: expected an integer")
    if k < 1:
        raise ConstructionError("k: must be at least 1")
    if d < k:
        raise ConstructionError("d: rank cannot exceed dimension")
    return ratio(k) * ratio(k + 1, k) ** d


@dataclass(frozen=True)
class VolumeReport:
    dim: int
    rank: int
    total: object
    copies: tuple
    bound: object
    ratio_expected: object
    ratios_match: bool
    holds: bool
    tight: bool


def volume_inequality_check(
    X: PointSet, k: int, check_rank: bool = True, dim_cap: int = VOLUME_DIM_CAP
) -> VolumeReport:
    """Measure the copies of conv X shrunk toward each point by k/(k+1).

    Every copy has exactly (k/(k+1))^d of the total volume, and for a
    rank-k antipodal X the copies' interiors cannot cover any hull point
    more than k deep, so their volumes sum to at most k times the total.
    """
    d = X.dim
    if affine_rank(X) != d:
        raise ConstructionError("X must span its ambient space")
    if check_rank:
        report = is_rank_k_antipodal(X, k)
        if not report.antipodal:
            raise ConstructionError(
                f"X is not rank-{k} antipodal, subset {report.failing_subset} fails"
            )
    lam = ratio(k, k + 1)
    hull = Polytope(X)
    total = volume(hull, dim_cap=dim_cap)
    copies = []
    for q in X:
        shrink = Dilation(q, lam)
        copies.append(
            volume(
                Polytope.from_points(shrink.apply(v) for v in X),
                dim_cap=dim_cap,
            )
        )
    expected = lam**d
    bound = ratio(k) * total
    summed = sum(copies, ratio(0))
    return VolumeReport(
        dim=d,
        rank=k,
        total=total,
        copies=tuple(copies),
        bound=bound,
        ratio_expected=expected,
        ratios_match=all(c == expected * total for c in copies),
        holds=summed <= bound,
        tight=summed == bound,
    )


@dataclass(frozen=True)
class GapReport:
    k: int
    d0: int
    b: int
    exponent: LogRatio
    limit: LogRatio
    zero_gap: bool
    gap_positive: bool
    equalizing_size: object
    equalizing_integral: bool


def gap_analysis(k: int, d0: int, b: int) -> GapReport:
    """Compare product-construction growth against the size bound.

    With base size b and rank k, codes give at most (b/k)^m points in
    dimension m*d0, an exponent of (1/d0)*log(b/k) per dimension; the
    size bound allows log((k+1)/k).  The exponents meet only at
    b = k*((k+1)/k)^d0, which is an integer only in degenerate cases,
    so the report also says whether that equalizing size is achievable.
    """
    for label, value in (("k", k), ("d0", d0), ("b", b)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConstructionError(f"{label}: expected an integer")
    if k < 1:
        raise ConstructionError("k: must be at least 1")
    if d0 < k:
        raise ConstructionError("d0: must be at least k")
    if b < k + 1:
        raise ConstructionError("b: need at least k + 1 base points")
    _, upper = rate_bounds(b, k + 1)
    exponent = upper.scaled(ratio(1, d0))
    limit = LogRatio(1, ratio(k + 1, k))
    equalizing = size_bound(d0, k)
    return GapReport(
        k=k,
        d0=d0,
        b=b,
        exponent=exponent,
        limit=limit,
        zero_gap=exponent == limit,
        gap_positive=exponent < limit,
        equalizing_size=equalizing,
        equalizing_integral=is_integer_ratio(equalizing),
    )
