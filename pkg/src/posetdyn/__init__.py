"""Increasing labelings, the Gamma poset of meet irreducibles, generalized
promotion and the toggle group, with exhaustive verification helpers."""

from .errors import (
    BudgetExceeded,
    InconsistentRestriction,
    InputFormatError,
    InvalidLabeling,
    NotAnIdeal,
    NotAToggleOrder,
    PosetError,
    RelationViolation,
)
from .gamma import (
    GammaPoset,
    build_gamma,
    build_gamma_interval,
    build_gamma_q,
    build_gamma_weak,
    ideal_to_labeling,
    labeling_to_ideal,
    lambda_chain_product_iso,
    rank_shift,
)
from .labelings import (
    IncreasingLabeling,
    RestrictionFunction,
    enumerate_labelings,
    induced_restriction,
    labeling_array,
)
from .poset import Poset, antichain, chain, enumerate_order_ideals, product_of_chains
from .promotion import (
    bender_knuth,
    binary_content,
    inc_promotion,
    jdt_promotion,
    sliding_subposet,
    verify_bk_jdt,
    verify_equivariance,
    verify_resonance,
    verify_row_resonance,
)
from .toggles import (
    IdealSpace,
    build_conjugator,
    gyration,
    orbit_structure,
    row_to_togpro_conjugator,
    rowmotion,
    toggle,
    toggle_promotion,
)

__version__ = "0.1.0"
