"""Intersection-space cohomology of hypersurfaces with one isolated singularity."""

from .errors import InputError, IsctError, ResourceGuardError, TheoremViolation
from .exactq import RationalMatrix, quotient_projection, rank_profile, solve_linear
from .hypersurface import HypersurfaceFamily, euler_characteristic_oracle, smooth_betti
from .invariants import (
    InvariantReport,
    assemble_report,
    fiber_betti,
    hi_betti,
    is_hypercohomology,
    link_middle_betti,
    stalk_table,
)
from .singularity import (
    MonodromyData,
    SingularityGerm,
    bp_eigenvalue_residues,
    cyclotomic_factorization,
    milnor_number_bp_oracle,
    milnor_number_wh,
    monodromy_data,
    monodromy_from_cyclotomic,
    monodromy_model,
)
from .zigzag import (
    ZigZag,
    ZigZagModel,
    ZigZagMorphism,
    cokernel_zigzag,
    construct_splitting,
    dual_zigzag,
    find_isomorphism,
    hom_space,
    nearby_zigzag,
    perverse_hom_dimension,
    validate,
    vanishing_image_zigzag,
)

__version__ = "0.1.0"
