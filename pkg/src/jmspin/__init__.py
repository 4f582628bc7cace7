"""Joint measurability of two-outcome qubit observables.

Decides compatibility of binary qubit POVMs (closed-form criterion for the
unbiased case, a numeric feasibility oracle in general), scores approximations
of sharp spin observables by statistical and root-mean-square metrics, and
traces the optimal trade-off boundaries between jointly measurable
approximation pairs.
"""

from .algebra import (
    BinaryObservable,
    BlochVector,
    HermitianOp,
    ProblemInstance,
    effect_from_parameters,
    min_eigenvalue,
    outcome_probability,
    sharp_spin,
)
from .boundary import (
    METRICS,
    RmsOptimum,
    SymmetricOptimum,
    TradeoffPoint,
    boundary_curve,
    ellipsoid_distance,
    min_partner_distance,
    region_membership,
    rms_optimal_direction,
    saturation_distance,
    symmetric_optimum,
)
from .distances import (
    DeviationReport,
    RmsReport,
    average_deviation,
    deviation_report,
    monte_carlo_average_deviation,
    monte_carlo_worst_deviation,
    rms_decomposition,
    rms_distance,
    rms_noise,
    rms_report,
    statistical_distance,
    worst_case_deviation,
)
from .errors import (
    BiasedObservable,
    DistanceOutOfRange,
    InvalidState,
    JmspinError,
    NegativeRadicand,
    NotJointlyMeasurable,
    NotUnitVector,
    OutOfEffectCone,
    SolverDidNotConverge,
)
from .measurability import (
    FeasibilityResult,
    JointPovm4,
    busch_margin,
    construct_joint_povm,
    jm_ellipsoid_contains,
    joint_feasibility,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryObservable",
    "BlochVector",
    "HermitianOp",
    "ProblemInstance",
    "effect_from_parameters",
    "min_eigenvalue",
    "outcome_probability",
    "sharp_spin",
    "METRICS",
    "RmsOptimum",
    "SymmetricOptimum",
    "TradeoffPoint",
    "boundary_curve",
    "ellipsoid_distance",
    "min_partner_distance",
    "region_membership",
    "rms_optimal_direction",
    "saturation_distance",
    "symmetric_optimum",
    "DeviationReport",
    "RmsReport",
    "average_deviation",
    "deviation_report",
    "monte_carlo_average_deviation",
    "monte_carlo_worst_deviation",
    "rms_decomposition",
    "rms_distance",
    "rms_noise",
    "rms_report",
    "statistical_distance",
    "worst_case_deviation",
    "BiasedObservable",
    "DistanceOutOfRange",
    "InvalidState",
    "JmspinError",
    "NegativeRadicand",
    "NotJointlyMeasurable",
    "NotUnitVector",
    "OutOfEffectCone",
    "SolverDidNotConverge",
    "FeasibilityResult",
    "JointPovm4",
    "busch_margin",
    "construct_joint_povm",
    "jm_ellipsoid_contains",
    "joint_feasibility",
]
