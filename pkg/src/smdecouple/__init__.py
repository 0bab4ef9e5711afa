"""Exact Smith-McMillan decoupling of square MIMO LTI plants.

The package decomposes a rational transfer matrix into its canonical
diagonal form through unimodular polynomial matrices, maps diagonal-domain
controllers back to the physical domain, certifies internal stability of
both loops, and checks singular-value performance bounds, all on exact
rational arithmetic with floating point confined to root extraction and
frequency sweeps.
"""

from .polyrat import (
    ConvergenceError,
    Poly,
    RatFunc,
    RootSet,
    poly_gcd,
    poly_lcm,
    poly_roots,
    square_free_decomposition,
)
from .polymat import (
    NotUnimodularError,
    PolyMatrix,
    RankDeficiencyError,
    SmDecomposition,
    determinant,
    is_unimodular,
    smith_form,
    smith_mcmillan,
    unimodular_inverse,
)
from .tfm import (
    PoleZeroStructure,
    SingularMatrixError,
    TransferMatrix,
    controller_backmap,
    properness_min_reldeg,
    transmission_structure,
)
from .loops import (
    ClosedLoopSet,
    IllPosedLoopError,
    LOOP_MAP_NAMES,
    gang_of_six,
    transform_to_original,
    verify_transform_identities,
)
from .stability import (
    DomainStabilityComparison,
    EntryStability,
    StabilityReport,
    check_internal_stability,
    check_rh_inf,
    internal_stability_matrix,
    stability_implication_harness,
)
from .freq import (
    BoundCheckReport,
    FrequencyGrid,
    HinfEstimate,
    PerformanceReport,
    PoleOnGridError,
    SigmaCurve,
    bode_export,
    essential_bound_check,
    freq_response,
    hinf_norm_estimate,
    max_singular_value,
    performance_check_original,
    sigma_curve,
)
from .sim import PartialFraction, TimeResponse, partial_fractions, step_response
from .design import (
    DesignError,
    LoopShapeSpec,
    MechParams,
    TWO_MASS_DEFAULTS,
    design1_controllers,
    known_transformation_pair,
    loopshape_siso,
    make_design2,
    two_mass_plant,
)

__version__ = "0.1.0"
