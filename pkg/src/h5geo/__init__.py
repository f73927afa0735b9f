"""Geodesic flow of the left-invariant sub-Riemannian metric on the
right-invariant distribution of the 5-dimensional Heisenberg group.

The package provides the exact Hamiltonian dynamics on the cotangent bundle,
the two-stage reduction to hyperspherical variables with four first integrals,
the classification of trajectories by the radial quartic, the closed-form
elliptic quadratures for every case tag, and a numerical integrator that
serves as an independent oracle for all of the above.
"""

__version__ = "0.1.0"

from ._core import BACKEND_NAME
from .classify import (
    CaseTag,
    QuarticProfile,
    TrajectoryKind,
    TrajectoryType,
    case_tag,
    classify,
    make_profile,
    profile_from_charges,
)
from .dynamics import (
    DriftReport,
    IntegratorConfig,
    drift_report,
    integrate_full,
    integrate_reduced,
    turning_points,
)
from .elliptic import (
    JacobiTriple,
    Modulus,
    complete_E,
    complete_K,
    ellint_E,
    ellint_F,
    invert_ratio,
    jacobi_E,
    jacobi_am,
    jacobi_ratio,
    jacobi_sncndn,
)
from .errors import (
    ChartSingularityError,
    DegenerateOrbitError,
    DivergenceError,
    DomainError,
    ExcludedLevelError,
    FeasibilityError,
    H5GeoError,
    HorizontalityError,
    InfeasibleProfileError,
    InvariantError,
    LevelSetError,
    PoleError,
    StiffnessError,
)
from .heisenberg import (
    IDENTITY,
    CotangentState,
    GroupElement,
    TangentVector,
    full_rhs,
    hamiltonian_full,
    horizontality_defect,
    inverse,
    left_frame,
    metric_tensor,
    multiply,
    right_frame,
    sr_speed,
)
from .quadrature import (
    RadialSolution,
    Theta1Solution,
    geodesic_quadrature,
    radius_of_time,
    reconstruct_ambient,
    rescaled_time,
    tau_of_radius,
    theta1_along,
    theta1_solution,
    theta23_along,
    theta23_variant_audit,
    time_of_radius,
)
from .reduction import (
    ConservedCharges,
    HypersphericalState,
    ReducedCartesianState,
    cart_to_hyper,
    charges_from_state,
    from_reduced,
    hamiltonian_HC,
    hamiltonian_hyper,
    hyper_to_cart,
    integrals,
    rhs_HC,
    rhs_hyper,
    state_from_charges,
    structure_matrix,
    theta1_radicand,
    to_reduced,
)
from .trace import AmbientTrace, GeodesicTrace
