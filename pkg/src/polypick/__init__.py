"""Extremal three-point Pick interpolation on polydiscs.

Recovers the analytic disc through the nodes, synthesizes the rational inner
interpolant as a composition of two-variable inner blocks, classifies the
problem (degenerate / one-dimensional / reducible / maximal), and
cross-checks every result against independent oracles: Pick matrices on the
disc, the two-kernel decomposition on the bidisc, and boundary sampling.
"""

from .classify import Classification, classify, dimension, is_degenerate, two_point_extremal
from .errors import (
    DegenerateCombination,
    DegenerateData,
    DimensionMismatch,
    EqualAlphas,
    IncompatibleDegenerateThirdValue,
    InconsistentRatio,
    LowerDimensional,
    NoConvergence,
    NodesNotDistinct,
    NotExtremal,
    NotExtremalDatum,
    PolypickError,
    TargetsNotDistinct,
    UnsolvableDatum,
    UnsolvablePair,
)
from .agler import AglerCertificate, AglerResult, agler_feasible, feasibility_crossover
from .estimator import PickInterpolator
from .geodesic import (
    ExtremalScaleResult,
    GeodesicParams,
    InversionDiagnostics,
    ProjectiveTarget,
    extremal_scale,
    geodesic_eval,
    invert_phi,
    phi_map,
)
from .hyperbolic import (
    BlaschkeProduct,
    MobiusMap,
    PickProblem,
    ProblemTransform,
    blaschke_eval,
    mobius,
    normalize_problem,
    polydisc_distance,
    pseudo_hyperbolic,
)
from .magic import (
    RationalInnerFunction,
    build_left_inverse,
    caratheodory_reduce,
    eta_for,
    magic_eval,
    rif_eval,
)
from .schur_pick import (
    DiscSolvability,
    blaschke_interpolate,
    disc_extremal_scale,
    is_solvable_disc,
    mobius_interpolant,
    pick_matrix,
)
from .solver import (
    CoordinateInterpolant,
    SolveReport,
    VerificationSummary,
    solve,
    uniqueness_variety_sample,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "AglerCertificate",
    "AglerResult",
    "BlaschkeProduct",
    "Classification",
    "CoordinateInterpolant",
    "DegenerateCombination",
    "DegenerateData",
    "DimensionMismatch",
    "DiscSolvability",
    "EqualAlphas",
    "ExtremalScaleResult",
    "GeodesicParams",
    "IncompatibleDegenerateThirdValue",
    "InconsistentRatio",
    "InversionDiagnostics",
    "LowerDimensional",
    "MobiusMap",
    "NoConvergence",
    "NodesNotDistinct",
    "NotExtremal",
    "NotExtremalDatum",
    "PickInterpolator",
    "PickProblem",
    "PolypickError",
    "ProblemTransform",
    "ProjectiveTarget",
    "RationalInnerFunction",
    "SolveReport",
    "TargetsNotDistinct",
    "UnsolvableDatum",
    "UnsolvablePair",
    "VerificationSummary",
    "agler_feasible",
    "blaschke_eval",
    "blaschke_interpolate",
    "build_left_inverse",
    "caratheodory_reduce",
    "classify",
    "dimension",
    "disc_extremal_scale",
    "eta_for",
    "extremal_scale",
    "feasibility_crossover",
    "geodesic_eval",
    "invert_phi",
    "is_degenerate",
    "is_solvable_disc",
    "magic_eval",
    "mobius",
    "mobius_interpolant",
    "normalize_problem",
    "phi_map",
    "pick_matrix",
    "polydisc_distance",
    "pseudo_hyperbolic",
    "rif_eval",
    "solve",
    "two_point_extremal",
    "uniqueness_variety_sample",
    "verify",
]
