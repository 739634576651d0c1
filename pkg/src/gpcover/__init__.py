"""Covering finite groups by products of conjugates of subsets."""

__version__ = "0.1.0"

from .classes import (ClassSpectrum, MindegInfo, character_degrees, check_landseitz, check_rank_bounds,
                      conjugacy_classes, mindeg, spectrum_of)
from .errors import (CoverError, EmptySubsetError, GpcoverError, GroupTooLarge, InputError, MetadataError,
                     MindegUnavailable, PreconditionError, ResourceCapError, ValidationError)
from .groups import GroupTable, build_family, build_from_cayley_table, build_from_permutations, is_simple
from .normal import normal_product_cover, rs_exponent_search
from .solver import (CoverCertificate, PipelineConfig, best_conjugator, exhaustive_oracle, gowers_cover,
                     pipeline, small_phase_find_g, verify_certificate)
from .subsets import Subset, conjugate_subset, find_generating_translate, product, random_subset

__all__ = [
    "__version__",
    "ClassSpectrum", "MindegInfo", "character_degrees", "check_landseitz", "check_rank_bounds",
    "conjugacy_classes", "mindeg", "spectrum_of",
    "CoverError", "EmptySubsetError", "GpcoverError", "GroupTooLarge", "InputError", "MetadataError",
    "MindegUnavailable", "PreconditionError", "ResourceCapError", "ValidationError",
    "GroupTable", "build_family", "build_from_cayley_table", "build_from_permutations", "is_simple",
    "normal_product_cover", "rs_exponent_search",
    "CoverCertificate", "PipelineConfig", "best_conjugator", "exhaustive_oracle", "gowers_cover",
    "pipeline", "small_phase_find_g", "verify_certificate",
    "Subset", "conjugate_subset", "find_generating_translate", "product", "random_subset",
]
