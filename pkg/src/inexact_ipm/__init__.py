"""Inexact feasible primal-dual interior point methods for convex QP."""

from .errors import (
    AuditViolation,
    DimensionMismatch,
    IPMError,
    MarginOutOfRange,
    MaxInnerIterations,
    MissingFile,
    NotPSD,
    NotSymmetric,
    NumericalBreakdown,
    ParamsInfeasible,
    ParseError,
    RankDeficient,
    RankResampleExhausted,
    SingularSystem,
    StartOutsideNeighbourhood,
    StepsizeUnderflow,
    ValidationError,
    ValidationFailed,
)
from .generator import GenSpec, generate, perturb_within, rebuild_cost
from .ipm import (
    SolveResult,
    SolverConfig,
    Status,
    StepMode,
    TraceRecord,
    Variant,
    longstep_alpha_bounds,
    longstep_iteration,
    mu_after_step,
    run,
    shortstep_iteration,
)
from .neighborhood import N2, NS, ProximityReport, in_n2, in_ns, proximity
from .newton import (
    InexactMode,
    InexactnessPolicy,
    InjectShape,
    NewtonDirection,
    NewtonTarget,
    NormTag,
    assemble_target,
    inject_residual,
    second_order_diagnostics,
    solve_exact,
    solve_iterative,
)
from .qp_model import FeasibilityReport, Iterate, QpProblem, measure, objective_pair, validate

__version__ = "0.1.0"
