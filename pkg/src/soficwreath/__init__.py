"""soficwreath: build and certify sofic approximations of wreath products.

Given finite windowed approximations of a lamp group and a base group by
permutations, the library assembles an approximation of their wreath product
acting coordinate-wise on the product carrier, evaluates every normalized
Hamming distance exactly through a sparse factorized representation, and
emits machine-checkable certificates with exact rational defects.
"""

from .perm import (
    Permutation,
    agreement_fraction,
    compose,
    hamming,
    random_permutation,
    transposition,
)
from .groups import (
    DirectSum,
    FinSuppMap,
    Group,
    WreathElement,
    WreathProduct,
    cyclic,
    finite_from_table,
    free,
    group_from_descriptor,
    integers,
    symmetric,
    wreath_product,
)
from .sofic import (
    CertificateError,
    DefectReport,
    SoficApprox,
    WindowViolationError,
    cyclic_quotient,
    is_free,
    is_multiplicative,
    is_sofic_approx,
    perturb,
    quotient_by_images,
    random_rule,
    regular_rep,
)
from .bigperm import (
    EXPANSION_CAP,
    CoordAction,
    compose_actions,
    action_distance,
    coord_action,
    expand_explicit,
    fixed_fraction,
    identity_action,
    random_coord_action,
)
from .construct import (
    Budget,
    GoodBlock,
    WindowSets,
    WreathApprox,
    base_action,
    block_lamp_action,
    build,
    compute_good_blocks,
    derive_windows,
    lamp_action,
    lamp_factor,
    make_budget,
    wreath_approx_from_json,
)
from .verify import (
    AlmostHomReport,
    Certificate,
    DetailedReport,
    GoodBlockReport,
    check_almost_homomorphism,
    check_good_block_bound,
    detailed_reports,
    verify_construction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
