"""Exact-arithmetic toolkit for 1-D self-similar sets.

Interval-set algebra over rationals, iterated-function-system families,
certified decisions on which contractive similitudes embed the attractor
into itself, and harnesses that verify the embedding characterizations
on concrete instances.
"""

from .cover import (
    DEFAULT_BUDGET,
    CoverReport,
    cover,
    exact_points,
    family_gap,
    stable_gap_check,
)
from .embedding import (
    BRANCH_DEPTH,
    COVER_DEPTH,
    MAX_STEPS,
    POINT_DEPTH,
    EmbeddingVerdict,
    EnumerationResult,
    ExchangePair,
    ExcludedWitness,
    IncludedCylinderExchange,
    IncludedReflectedWord,
    IncludedWord,
    MirrorReduction,
    check_embedding,
    decompose,
    enumerate_embeddings,
    enumeration_record,
    find_matching_words,
    locate_piece,
    mirror_reduce,
    verdict_record,
)
from .errors import (
    AlphabetMismatch,
    BudgetExceeded,
    EmptySet,
    HypothesisViolated,
    NonpositiveDelta,
    NotCovered,
    ParameterOutOfRange,
    SelfsimError,
    StepBudgetExceeded,
    UntaggedFamily,
    WrongFamilyRange,
)
from .ifsfile import SpecFileError, parse_ifs, parse_ifs_file, serialize_ifs
from .intervals import Interval, IntervalSet, Neighborhood, intersect_shifted
from .rationals import format_rational, parse_rational
from .similitudes import (
    IDENTITY,
    IFS,
    AsymmetricWitness,
    Similitude,
    SymmetricCertified,
    SymmetryVerdict,
    UnknownAtDepth,
    Word,
    equal_gap,
    four_map_example,
    homogeneous_grid,
    is_symmetric,
    mirror,
    mirror_word,
    reflection_about,
    similarity_dimension,
    three_map,
    two_map,
    word_map,
)
from .verify import (
    Check,
    Depths,
    Grid,
    InventoryRow,
    TheoremId,
    TheoremReport,
    TwoMap,
    perturb_expected,
    report_lines,
    report_record,
    verify_corollary,
    verify_equal_gap,
    verify_example_four_map,
    verify_three_map,
    words_with_ratio_product,
)

__version__ = "0.1.0"

__all__ = [
    "AlphabetMismatch",
    "AsymmetricWitness",
    "BRANCH_DEPTH",
    "BudgetExceeded",
    "COVER_DEPTH",
    "Check",
    "CoverReport",
    "DEFAULT_BUDGET",
    "Depths",
    "EmbeddingVerdict",
    "EmptySet",
    "EnumerationResult",
    "ExchangePair",
    "ExcludedWitness",
    "Grid",
    "HypothesisViolated",
    "IDENTITY",
    "IFS",
    "IncludedCylinderExchange",
    "IncludedReflectedWord",
    "IncludedWord",
    "Interval",
    "IntervalSet",
    "InventoryRow",
    "MAX_STEPS",
    "MirrorReduction",
    "Neighborhood",
    "NonpositiveDelta",
    "NotCovered",
    "POINT_DEPTH",
    "ParameterOutOfRange",
    "SelfsimError",
    "Similitude",
    "SpecFileError",
    "StepBudgetExceeded",
    "SymmetricCertified",
    "SymmetryVerdict",
    "TheoremId",
    "TheoremReport",
    "TwoMap",
    "UnknownAtDepth",
    "UntaggedFamily",
    "Word",
    "WrongFamilyRange",
    "check_embedding",
    "cover",
    "decompose",
    "enumerate_embeddings",
    "enumeration_record",
    "equal_gap",
    "exact_points",
    "family_gap",
    "find_matching_words",
    "format_rational",
    "four_map_example",
    "homogeneous_grid",
    "intersect_shifted",
    "is_symmetric",
    "locate_piece",
    "mirror",
    "mirror_reduce",
    "mirror_word",
    "parse_ifs",
    "parse_ifs_file",
    "parse_rational",
    "perturb_expected",
    "reflection_about",
    "report_lines",
    "report_record",
    "serialize_ifs",
    "similarity_dimension",
    "stable_gap_check",
    "three_map",
    "two_map",
    "verdict_record",
    "verify_corollary",
    "verify_equal_gap",
    "verify_example_four_map",
    "verify_three_map",
    "word_map",
    "words_with_ratio_product",
]
