"""Finite covers of an attractor, certified points, and stable gaps.

The depth-n cover is the union of all n-fold cylinder images of the hull;
it contains the attractor, shrinks as n grows, and its gaps are certified
attractor-free zones.  Exact points are images of generator fixed points
under bounded words and are certified members of the attractor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BudgetExceeded, ParameterOutOfRange, SelfsimError, UntaggedFamily
from .intervals import Interval, IntervalSet
from .similitudes import IFS

DEFAULT_BUDGET = 10**6


def _check_budget(m: int, depth: int, budget: int) -> None:
    count = m**depth
    if count > budget:
        raise BudgetExceeded(count, budget)


@dataclass(frozen=True)
class CoverReport:
    """Depth-n cover with its piece count and largest gap."""

    depth: int
    parts: IntervalSet
    piece_count: int
    largest_gap: Fraction


@lru_cache(maxsize=None)
def _cover_set(ifs: IFS, depth: int) -> IntervalSet:
    if depth == 0:
        return IntervalSet((ifs.hull,))
    prev = _cover_set(ifs, depth - 1)
    parts: list[Interval] = []
    for f in ifs.maps:
        parts.extend(prev.affine(f.ratio, f.offset).parts)
    return IntervalSet(parts)


def cover(ifs: IFS, depth: int, budget: int = DEFAULT_BUDGET) -> CoverReport:
    """All depth-n cylinder images of the hull, merged to canonical form.

    Touching cylinders merge, so piece_count can be smaller than m**n.
    Raises BudgetExceeded when m**n would exceed ``budget``.
    """
    if depth < 0:
        raise ParameterOutOfRange("depth >= 0 violated")
    _check_budget(ifs.arity, depth, budget)
    parts = _cover_set(ifs, depth)
    return CoverReport(
        depth=depth,
        parts=parts,
        piece_count=len(parts),
        largest_gap=parts.largest_gap(),
    )


@lru_cache(maxsize=None)
def _points_upto(ifs: IFS, depth: int) -> tuple[Fraction, ...]:
    if depth == 0:
        level = {f.fixed_point for f in ifs.maps}
        return tuple(sorted(level))
    acc = set(_points_upto(ifs, depth - 1))
    # images of the previous shell are exactly the new word images
    shell = _shell(ifs, depth)
    acc.update(shell)
    return tuple(sorted(acc))


@lru_cache(maxsize=None)
def _shell(ifs: IFS, depth: int) -> frozenset[Fraction]:
    if depth == 0:
        return frozenset(f.fixed_point for f in ifs.maps)
    prev = _shell(ifs, depth - 1)
    return frozenset(f(x) for f in ifs.maps for x in prev)


def exact_points(
    ifs: IFS, depth: int, budget: int = DEFAULT_BUDGET
) -> tuple[Fraction, ...]:
    """Sorted images of generator fixed points under words of length <= depth.

    Every returned point lies in the attractor: fixed points do, and the
    attractor is closed under the generators.
    """
    if depth < 0:
        raise ParameterOutOfRange("depth >= 0 violated")
    _check_budget(ifs.arity, depth, budget)
    return _points_upto(ifs, depth)


def family_gap(ifs: IFS, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Closed-form largest gap of the attractor for tagged families.

    The formula route is independent of the cover route on purpose;
    stable_gap_check compares the two.  Untagged systems have no closed
    form here: use the cover largest gap instead.
    """
    if ifs.family == "three-map":
        rho = ifs.maps[0].ratio
        lam = ifs.maps[1].offset
        return max(lam - rho, 1 - 2 * rho - lam)
    if ifs.family in ("equal-gap", "two-map", "grid"):
        total = sum((f.ratio for f in ifs.maps), Fraction(0))
        return (1 - total) / (ifs.arity - 1)
    if ifs.family == "four-map-example":
        shallow = _cover_set(ifs, 1).largest_gap_interval()
        deep = _cover_set(ifs, 2).largest_gap_interval()
        if shallow != deep:
            raise SelfsimError("largest gap did not stabilize by depth 2")
        assert shallow is not None
        return shallow.length
    raise UntaggedFamily(
        "no closed-form gap for an untagged system; use the cover largest gap"
    )


def stable_gap_check(ifs: IFS, depth: int, budget: int = DEFAULT_BUDGET) -> bool:
    """True when the depth-n cover's largest gap equals the family value."""
    if depth < 1:
        raise ParameterOutOfRange("depth >= 1 violated")
    return cover(ifs, depth, budget).largest_gap == family_gap(ifs)
