"""Deciding and certifying self-embeddings of an attractor.

Three cooperating procedures, kept deliberately independent so they can
cross-check each other:

* ``check_embedding``: branch-and-certify search producing algebraic
  inclusion certificates or point-in-gap exclusion witnesses.
* ``decompose``: greedy longest-word descent through cylinder hulls.
* ``enumerate_embeddings``: constraint propagation over exact interval
  sets, finding every feasible offset for a fixed ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cover import DEFAULT_BUDGET, cover, exact_points
from .errors import (
    EmptySet,
    HypothesisViolated,
    NotCovered,
    ParameterOutOfRange,
    StepBudgetExceeded,
    WrongFamilyRange,
)
from .intervals import Interval, IntervalSet, intersect_shifted
from .rationals import format_rational
from .similitudes import (
    IDENTITY,
    IFS,
    Similitude,
    SymmetricCertified,
    UnknownAtDepth,
    Word,
    is_symmetric,
    mirror,
    mirror_word,
    reflection_about,
    word_map,
)

POINT_DEPTH = 4
COVER_DEPTH = 8
BRANCH_DEPTH = 6
MAX_STEPS = 64


# -- verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class IncludedWord:
    """f equals the word map of ``word`` exactly."""

    word: Word


@dataclass(frozen=True)
class IncludedReflectedWord:
    """f equals word map composed with the reflection about ``center``."""

    word: Word
    center: Fraction


@dataclass(frozen=True)
class ExchangePair:
    """Exact identity f∘φ_branch = φ_target (right-composed with the hull
    reflection when ``reflected``)."""

    branch: Word
    target: Word
    reflected: bool = False


@dataclass(frozen=True)
class IncludedCylinderExchange:
    """f maps each listed cylinder onto a word cylinder, proving inclusion
    without f being a word map itself."""

    pairs: tuple[ExchangePair, ...]


@dataclass(frozen=True)
class ExcludedWitness:
    """A certified attractor point whose image lies strictly inside a gap
    of the depth-``depth`` cover (depth 0 marks escape past the hull)."""

    point: Fraction
    gap: Interval
    depth: int


EmbeddingVerdict = (
    IncludedWord
    | IncludedReflectedWord
    | IncludedCylinderExchange
    | ExcludedWitness
    | UnknownAtDepth
)

INCLUDED_KINDS = (IncludedWord, IncludedReflectedWord, IncludedCylinderExchange)


# -- word matching ----------------------------------------------------------


def find_matching_words(ifs: IFS, g: Similitude, limit: int = 64) -> tuple[Word, ...]:
    """All words w with word_map(w) == g, in lexicographic order.

    Depth-first descent dividing out one generator at a time.  A branch
    dies when its residual ratio overshoots 1 or its hull image leaves the
    hull; both prunes are exact, so the search is complete up to ``limit``
    letters.
    """
    if g.ratio <= 0:
        return ()
    hull = ifs.hull
    out: list[Word] = []

    def descend(h: Similitude, prefix: tuple[int, ...]) -> None:
        if h == IDENTITY:
            out.append(Word(ifs.arity, prefix))
            return
        if h.ratio > 1 or len(prefix) >= limit:
            return
        if not hull.contains_interval(h.map_interval(hull)):
            return
        for i, f in enumerate(ifs.maps, start=1):
            descend(f.invert().compose(h), prefix + (i,))

    descend(g, ())
    return tuple(out)


def _close_branch(
    ifs: IFS, h: Similitude, sigma: Similitude | None
) -> tuple[Word, bool] | None:
    """Word w with h == φ_w, or h == φ_w∘σ when a certified reflection is
    available; None when the branch stays open."""
    if h.ratio > 0:
        words = find_matching_words(ifs, h)
        if words:
            return words[0], False
    elif sigma is not None:
        words = find_matching_words(ifs, h.compose(sigma))
        if words:
            return words[0], True
    return None


# -- check_embedding --------------------------------------------------------


class _WitnessFound(Exception):
    def __init__(self, verdict: ExcludedWitness):
        self.verdict = verdict


def _escape_gap(hull: Interval, y: Fraction) -> Interval:
    if y < hull.lo:
        return Interval(y, hull.lo)
    return Interval(hull.hi, y)


def check_embedding(
    ifs: IFS,
    f: Similitude,
    point_depth: int = POINT_DEPTH,
    cover_depth: int = COVER_DEPTH,
    branch_depth: int = BRANCH_DEPTH,
    budget: int = DEFAULT_BUDGET,
) -> EmbeddingVerdict:
    """Branch-and-certify decision for f(K) ⊆ K.

    Each branch word u is closed by the exact identity f∘φ_u = φ_w (or
    φ_w∘σ on certified-symmetric systems), refuted by a certified point of
    the u-cylinder mapping strictly into a cover gap, or split into its m
    children up to branch_depth.  A closed root gives a word certificate;
    a fully closed tree gives a cylinder-exchange certificate; any
    refutation is returned immediately; everything else is unknown.
    """
    if not 0 < abs(f.ratio) < 1:
        raise ParameterOutOfRange("0 < |ratio| < 1 violated")
    if point_depth < 1 or cover_depth < 1 or branch_depth < 1:
        raise ParameterOutOfRange("depths >= 1 violated")
    return _check_embedding_cached(
        ifs, f, point_depth, cover_depth, branch_depth, budget
    )


@lru_cache(maxsize=4096)
def _check_embedding_cached(
    ifs: IFS,
    f: Similitude,
    point_depth: int,
    cover_depth: int,
    branch_depth: int,
    budget: int,
) -> EmbeddingVerdict:
    sym = is_symmetric(ifs)
    sigma = (
        reflection_about(sym.center) if isinstance(sym, SymmetricCertified) else None
    )
    hull = ifs.hull
    root_pts = exact_points(ifs, point_depth, budget)
    branch_pts = exact_points(ifs, min(point_depth, 1), budget)
    covers = [cover(ifs, n, budget).parts for n in range(1, cover_depth + 1)]
    deepest = covers[-1]

    def hunt_witness(u_map: Similitude, h: Similitude, pts: Sequence[Fraction]) -> None:
        # a point inside the deepest cover lies inside every shallower
        # cover, so only deepest-cover misses can realize a gap witness
        suspects: list[Fraction] = []
        for q in pts:
            y = h(q)
            if not hull.contains(y):
                raise _WitnessFound(ExcludedWitness(u_map(q), _escape_gap(hull, y), 0))
            if not deepest.contains_point(y):
                suspects.append(q)
        for n, parts in enumerate(covers, start=1):
            for q in suspects:
                gap = parts.gap_containing(h(q))
                if gap is not None:
                    raise _WitnessFound(ExcludedWitness(u_map(q), gap, n))

    pairs: list[ExchangePair] = []

    def explore(u: Word, u_map: Similitude, h: Similitude) -> bool:
        closed = _close_branch(ifs, h, sigma)
        if closed is not None:
            target, reflected = closed
            pairs.append(ExchangePair(u, target, reflected))
            return True
        hunt_witness(u_map, h, root_pts if len(u) <= 1 else branch_pts)
        if len(u) >= branch_depth:
            return False
        results = [
            explore(
                u.extended(i),
                u_map.compose(ifs.maps[i - 1]),
                h.compose(ifs.maps[i - 1]),
            )
            for i in range(1, ifs.arity + 1)
        ]
        return all(results)

    try:
        fully_closed = explore(ifs.empty_word(), IDENTITY, f)
    except _WitnessFound as found:
        return found.verdict

    if not fully_closed:
        return UnknownAtDepth(branch_depth)
    if len(pairs) == 1 and not pairs[0].branch.letters:
        root = pairs[0]
        if root.reflected:
            assert sigma is not None
            return IncludedReflectedWord(root.target, sigma.offset / 2)
        return IncludedWord(root.target)
    return IncludedCylinderExchange(tuple(pairs))


# -- locate_piece -----------------------------------------------------------


def locate_piece(target: IntervalSet, pieces: Sequence[IntervalSet]) -> int:
    """Index of the unique piece containing the target.

    Requires the separation hypothesis: the target's largest gap must be
    smaller than every pairwise distance between pieces, and the target
    must lie inside the union.  Under those hypotheses a single piece
    contains the whole target.
    """
    if len(pieces) < 2:
        raise ParameterOutOfRange("at least two pieces violated")
    if target.is_empty:
        raise EmptySet("cannot locate an empty target")
    target_gap = target.largest_gap()
    min_dist = min(
        pieces[i].dist(pieces[j])
        for i in range(len(pieces))
        for j in range(i + 1, len(pieces))
    )
    if not target_gap < min_dist:
        raise HypothesisViolated(
            f"target largest gap {target_gap} is not below "
            f"the minimal piece distance {min_dist}"
        )
    union = IntervalSet(tuple(p for piece in pieces for p in piece.parts))
    if not union.includes(target):
        stray = next(p for p in target.parts if not union.includes(IntervalSet((p,))))
        raise NotCovered(f"target part {stray} escapes the union of the pieces")
    for idx, piece in enumerate(pieces):
        if piece.includes(target):
            return idx
    raise AssertionError("separation hypothesis guarantees a containing piece")


# -- decompose --------------------------------------------------------------


def decompose(
    ifs: IFS,
    f: Similitude,
    max_steps: int = MAX_STEPS,
    point_depth: int = POINT_DEPTH,
    cover_depth: int = COVER_DEPTH,
    branch_depth: int = BRANCH_DEPTH,
    budget: int = DEFAULT_BUDGET,
) -> EmbeddingVerdict:
    """Greedy longest-word descent.

    Divide out the unique generator whose hull interval contains the
    residual's hull image; a residual of ratio exactly ±1 must be the
    identity (word certificate) or the certified reflection (reflected
    word).  When containment fails or is ambiguous beyond refinement the
    full branch-and-certify check takes over; that is where the exchange
    maps of the four-map system land.
    """
    if not 0 < abs(f.ratio) < 1:
        raise ParameterOutOfRange("0 < |ratio| < 1 violated")
    hull = ifs.hull

    def fallback() -> EmbeddingVerdict:
        return check_embedding(
            ifs, f, point_depth, cover_depth, branch_depth, budget
        )

    g = f
    letters: list[int] = []
    for _ in range(max_steps):
        if abs(g.ratio) == 1:
            word = Word(ifs.arity, tuple(letters))
            if g == IDENTITY:
                return IncludedWord(word)
            sym = is_symmetric(ifs)
            if isinstance(sym, SymmetricCertified) and g == reflection_about(
                sym.center
            ):
                return IncludedReflectedWord(word, sym.center)
            return fallback()
        image = g.map_interval(hull)
        cands = [
            i
            for i, child in enumerate(ifs.maps, start=1)
            if child.map_interval(hull).contains_interval(image)
        ]
        if len(cands) > 1:
            cands = _refine_by_location(ifs, g, cands, cover_depth, budget)
        if len(cands) != 1:
            return fallback()
        child = ifs.maps[cands[0] - 1]
        g = child.invert().compose(g)
        letters.append(cands[0])
    raise StepBudgetExceeded(f"no decomposition within {max_steps} steps")


def _refine_by_location(
    ifs: IFS, g: Similitude, cands: list[int], cover_depth: int, budget: int
) -> list[int]:
    """Disambiguate overlapping hull containment via the separation lemma
    on cover-refined images.  Returns a single candidate on success, the
    original list otherwise."""
    deep = cover(ifs, cover_depth, budget).parts
    shallow = cover(ifs, cover_depth - 1, budget).parts
    target = deep.affine(g.ratio, g.offset)
    pieces = [shallow.affine(f.ratio, f.offset) for f in ifs.maps]
    try:
        return [locate_piece(target, pieces) + 1]
    except (HypothesisViolated, NotCovered):
        return cands


# -- enumerate_embeddings ---------------------------------------------------


@dataclass(frozen=True)
class EnumerationResult:
    """Feasible offsets for one signed ratio."""

    ratio: Fraction
    certified: tuple[tuple[Similitude, EmbeddingVerdict], ...]
    candidates: tuple[Interval, ...]
    point_depth: int
    cover_depth: int

    @property
    def certified_offsets(self) -> tuple[Fraction, ...]:
        return tuple(f.offset for f, _ in self.certified)


def enumerate_embeddings(
    ifs: IFS,
    ratio,
    point_depth: int = POINT_DEPTH,
    cover_depth: int = COVER_DEPTH,
    branch_depth: int = BRANCH_DEPTH,
    budget: int = DEFAULT_BUDGET,
) -> EnumerationResult:
    """All offsets t for which x -> ratio*x + t can embed the attractor.

    Constraint propagation: each certified point p forces the offset into
    the cover translated by -ratio*p, and the hull must map into itself.
    The intersection of all constraints is exact; single-point components
    are then settled by check_embedding, wider components are reported as
    candidates for the caller to refine with larger depths.  Every true
    embedding offset satisfies every constraint, so nothing sound is lost.
    """
    ratio = Fraction(ratio)
    if not 0 < abs(ratio) < 1:
        raise ParameterOutOfRange("0 < |ratio| < 1 violated")
    hull = ifs.hull
    parts = cover(ifs, cover_depth, budget).parts
    pts = exact_points(ifs, point_depth, budget)

    if ratio > 0:
        feasible = Interval(hull.lo * (1 - ratio), hull.hi - ratio * hull.hi)
    else:
        feasible = Interval(hull.lo - ratio * hull.hi, hull.hi - ratio * hull.lo)
    remaining = IntervalSet((feasible,))

    center = ifs.center
    ordered = sorted(pts, key=lambda q: (-abs(q - center), q))
    # coarse warm-up: the depth-4 cover is a superset of the full one, so
    # these extra constraints shrink the offset set without changing the
    # final intersection, and keep the fine-grained passes cheap
    coarse = cover(ifs, min(cover_depth, 4), budget).parts
    for p in ordered[:2]:
        remaining = intersect_shifted(remaining, coarse, -ratio * p)
    for p in ordered:
        remaining = intersect_shifted(remaining, parts, -ratio * p)
        if remaining.is_empty:
            break

    certified: list[tuple[Similitude, EmbeddingVerdict]] = []
    candidates: list[Interval] = []
    for component in remaining:
        if component.lo == component.hi:
            f = Similitude(ratio, component.lo)
            verdict = check_embedding(
                ifs, f, point_depth, cover_depth, branch_depth, budget
            )
            if isinstance(verdict, INCLUDED_KINDS):
                certified.append((f, verdict))
            elif isinstance(verdict, UnknownAtDepth):
                candidates.append(component)
            # an ExcludedWitness settles the point: drop it
        else:
            candidates.append(component)
    return EnumerationResult(
        ratio=ratio,
        certified=tuple(certified),
        candidates=tuple(candidates),
        point_depth=point_depth,
        cover_depth=cover_depth,
    )


# -- serialization ----------------------------------------------------------


def verdict_record(verdict: EmbeddingVerdict) -> dict:
    """JSON-ready description of a verdict; rationals as "p/q" strings."""
    if isinstance(verdict, IncludedWord):
        return {"kind": "included-word", "word": list(verdict.word.letters)}
    if isinstance(verdict, IncludedReflectedWord):
        return {
            "kind": "included-reflected-word",
            "word": list(verdict.word.letters),
            "center": format_rational(verdict.center),
        }
    if isinstance(verdict, IncludedCylinderExchange):
        return {
            "kind": "included-cylinder-exchange",
            "pairs": [
                {
                    "branch": list(p.branch.letters),
                    "target": list(p.target.letters),
                    "reflected": p.reflected,
                }
                for p in verdict.pairs
            ],
        }
    if isinstance(verdict, ExcludedWitness):
        return {
            "kind": "excluded-witness",
            "point": format_rational(verdict.point),
            "gap": [format_rational(verdict.gap.lo), format_rational(verdict.gap.hi)],
            "depth": verdict.depth,
        }
    if isinstance(verdict, UnknownAtDepth):
        return {"kind": "unknown-at-depth", "depth": verdict.depth}
    raise TypeError(f"not a verdict: {verdict!r}")


def enumeration_record(result: EnumerationResult) -> dict:
    """JSON-ready description of an enumeration result."""
    return {
        "kind": "enumeration",
        "ratio": format_rational(result.ratio),
        "certified": [
            {"offset": format_rational(f.offset), "verdict": verdict_record(v)}
            for f, v in result.certified
        ],
        "candidates": [
            [format_rational(c.lo), format_rational(c.hi)]
            for c in result.candidates
        ],
        "point_depth": result.point_depth,
        "cover_depth": result.cover_depth,
    }


# -- mirror reduction -------------------------------------------------------


@dataclass(frozen=True)
class MirrorReduction:
    """Conjugated problem over the mirrored system.

    Any word answer w for ``conjugate`` pulls back to mirror_word(w) for
    the original map; the round trip f = σ∘conjugate∘σ is exact.
    """

    mirrored: IFS
    conjugate: Similitude
    reflection: Similitude

    def translate_word(self, word: Word) -> Word:
        return mirror_word(word)


def mirror_reduce(ifs: IFS, f: Similitude) -> MirrorReduction:
    """Reduce the upper offset range of the three-map family to the lower.

    Only systems with the middle offset above the symmetric value have
    anything to reduce; everything else is rejected.
    """
    if ifs.family != "three-map":
        raise WrongFamilyRange("mirror reduction applies to the three-map family only")
    rho = ifs.maps[0].ratio
    lam = ifs.maps[1].offset
    if not lam > (1 - rho) / 2:
        raise WrongFamilyRange(
            f"lambda > (1 - rho)/2 violated: lambda = {lam}, rho = {rho}"
        )
    mirrored, sigma = mirror(ifs)
    conjugate = sigma.compose(f).compose(sigma)
    return MirrorReduction(mirrored=mirrored, conjugate=conjugate, reflection=sigma)
