"""Exact finite-state stochastic effectivity functions."""
from .charrel import (CharRel, DownSet, canonical_relation, check_rules, extract_measure,
                      implements, satisfies)
from .compose import averaging_threshold, check_conv_ok, convolve
from .effectivity import (EffFn, Filter, Profile, detect_pointed, lift_convex_family,
                          lift_family_exists, lift_family_forall, lift_kernel, lift_nlmp,
                          lift_transition_system, member, profile, threshold)
from .equiv import (Congruence, EffMorphism, cospan_from_logical, is_congruence, is_morphism,
                    is_strong, kernel_congruence, logical_from_behavioral, logically_equivalent,
                    quotient)
from .errors import (InvariantError, NotACongruenceError, NotAMorphismError, SearchBoundExceeded,
                     SpaceMismatchError, StochEffError, UnknownStateError)
from .finspace import (FinSpace, MeasMap, Partition, SubProb, Subset, ThresholdQuery,
                       choquet_area, measure_of, pushforward)
from .geometry import Generator, Hull, Points
from .kernels import Kernel, kleisli
from .logic import (NeighborhoodModel, StochModel, eval_formula, eval_game, parse_formula,
                    parse_game)

__version__ = "0.1.0"

__all__ = [
    "CharRel",
    "DownSet",
    "canonical_relation",
    "check_rules",
    "extract_measure",
    "implements",
    "satisfies",
    "averaging_threshold",
    "check_conv_ok",
    "convolve",
    "EffFn",
    "Filter",
    "Profile",
    "detect_pointed",
    "lift_convex_family",
    "lift_family_exists",
    "lift_family_forall",
    "lift_kernel",
    "lift_nlmp",
    "lift_transition_system",
    "member",
    "profile",
    "threshold",
    "Congruence",
    "EffMorphism",
    "cospan_from_logical",
    "is_congruence",
    "is_morphism",
    "is_strong",
    "kernel_congruence",
    "logical_from_behavioral",
    "logically_equivalent",
    "quotient",
    "InvariantError",
    "NotACongruenceError",
    "NotAMorphismError",
    "SearchBoundExceeded",
    "SpaceMismatchError",
    "StochEffError",
    "UnknownStateError",
    "FinSpace",
    "MeasMap",
    "Partition",
    "SubProb",
    "Subset",
    "ThresholdQuery",
    "choquet_area",
    "measure_of",
    "pushforward",
    "Generator",
    "Hull",
    "Points",
    "Kernel",
    "kleisli",
    "NeighborhoodModel",
    "StochModel",
    "eval_formula",
    "eval_game",
    "parse_formula",
    "parse_game",
]
