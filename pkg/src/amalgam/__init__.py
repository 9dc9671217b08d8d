"""Exact computation with amalgamated free products of finite and abelian
groups: normal forms, quotient constructions, and separation certificates.
"""

from .certs import Certificate, Check, Exhausted, NotSeparatedAtLevelOne, WitnessResult
from .dsl import ResolvedSpec, SpecFile, format_specfile, parse, resolve
from .errors import AmalgamError
from .groups import (
    FiniteGroup,
    GroupHom,
    SeriesChain,
    Subgroup,
    abelian_invariants,
    center,
    commutator_subgroup,
    direct_product,
    frattini,
    group_from_permutations,
    is_nilpotent,
    is_solvable,
    maximal_subgroups,
    normal_closure,
    quotient_group,
    series,
    subgroup_closure,
)
from .lattice import (
    FGAbelian,
    IndexSplit,
    IntMatrix,
    LatticeSubgroup,
    SNFDecomposition,
    abelianization_from_presentation,
    finite_index_split,
    hnf,
    snf,
)
from .oracle import (
    hom_search,
    oracle_reduce,
    presentation_of_amalgam,
    solvable_catalog,
)
from .witness import (
    ENGINE_ORDER,
    abelian_factor_quotient,
    central_amalgam_quotient,
    cyclic_amalgam_quotient,
    derived_depth,
    double_retraction,
    not_perfect_certificate,
    separate_element,
)
from .words import (
    AmalgamSpec,
    NormalForm,
    build_generalized_central_product,
    induce_hom,
    reduce,
    validate_spec,
    word_label,
)

__all__ = [
    "AmalgamError",
    "AmalgamSpec",
    "Certificate",
    "Check",
    "ENGINE_ORDER",
    "Exhausted",
    "FGAbelian",
    "FiniteGroup",
    "GroupHom",
    "IndexSplit",
    "IntMatrix",
    "LatticeSubgroup",
    "NormalForm",
    "NotSeparatedAtLevelOne",
    "ResolvedSpec",
    "SNFDecomposition",
    "SeriesChain",
    "SpecFile",
    "Subgroup",
    "WitnessResult",
    "abelian_factor_quotient",
    "abelian_invariants",
    "abelianization_from_presentation",
    "build_generalized_central_product",
    "center",
    "central_amalgam_quotient",
    "commutator_subgroup",
    "cyclic_amalgam_quotient",
    "derived_depth",
    "direct_product",
    "double_retraction",
    "finite_index_split",
    "format_specfile",
    "frattini",
    "group_from_permutations",
    "hnf",
    "hom_search",
    "induce_hom",
    "is_nilpotent",
    "is_solvable",
    "maximal_subgroups",
    "normal_closure",
    "not_perfect_certificate",
    "oracle_reduce",
    "parse",
    "presentation_of_amalgam",
    "quotient_group",
    "reduce",
    "resolve",
    "separate_element",
    "series",
    "snf",
    "solvable_catalog",
    "subgroup_closure",
    "validate_spec",
    "word_label",
]
