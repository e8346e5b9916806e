"""Upper half-plane isometry arithmetic, geodesic and horocyclic flows,
winding around short closed geodesics, nested ping-pong families, and
numerical verification of the associated contraction bounds."""

from .plane import BoundaryPoint, HPoint, INFINITY, boundary_gap
from .moebius import (
    AxisData,
    DegenerateAxisError,
    IDENTITY,
    IsometryClass,
    MoebiusMap,
    NotHyperbolicError,
    apply_boundary,
    apply_point,
    axis_data,
    classify,
    compose,
    hyperbolic_from_axis,
    inverse,
    translation_length,
)
from .hplane import (
    CoincidentPointsError,
    DEFAULT_TOL,
    Geodesic,
    Tolerances,
    busemann,
    busemann_oracle,
    cross_time,
    dist,
    dist_to_geodesic,
    geodesic_through,
)
from .tangent import (
    AnglePair,
    U0,
    UnitVector,
    angle_pair,
    apply_isometry,
    d1,
    d2,
    frame_from,
    geodesic_flow,
    horocycle_flow,
    rotate,
)
from .winding import (
    KeyBoundReport,
    RayMissesAxisError,
    WindingResult,
    horocycle_alignment_check,
    key_bound_report,
    wind,
    winding_time,
)
from .schottky import (
    CertReport,
    DepthOverflowError,
    NestedSequence,
    NestedSpec,
    SpecInvalidError,
    ValidationReport,
    build_nested,
    certify_schottky,
    default_lengths,
    validate_nested,
)
from .walpha import (
    AlphaRun,
    ConvergenceReport,
    DiagonalReport,
    EmptyCandidatesError,
    InsufficientDepthError,
    PrecisionLossError,
    diagonal_avoid,
    diagonal_margins,
    quotient_d1_upper,
    quotient_d2_upper,
    run_alpha,
    schedule_bound,
    verify_wss,
    w_alpha,
)
from .checks import SUITE_NAMES, SuiteResult, run_all_suites, run_suite

__version__ = "0.1.0"
