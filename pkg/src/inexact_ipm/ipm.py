"""Short-step (N2) and long-step (N_S) inexact feasible interior point methods.

Every iteration emits a :class:`TraceRecord`. With ``audit=True`` each
iteration also checks the second-order bounds, the residual contract, the
neighbourhood of the new point and the per-iteration gap contraction, and
the run stops with ``Status.AUDIT_VIOLATION`` on the first failure.
"""

import dataclasses
import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .errors import (
    AuditViolation,
    MaxInnerIterations,
    NumericalBreakdown,
    ParamsInfeasible,
    SingularSystem,
    StartOutsideNeighbourhood,
    StepsizeUnderflow,
)
from .neighborhood import in_n2, in_ns, proximity
from .newton import (
    InexactMode,
    InexactnessPolicy,
    NormTag,
    assemble_target,
    compute_direction,
    second_order_diagnostics,
)
from .qp_model import Iterate, measure

logger = logging.getLogger(__name__)

AUDIT_SLACK = 1e-12
MU_CONSISTENCY_TOL = 1e-9
DXDS_IDENTITY_TOL = 1e-8
RY_TOL = 1e-10
BACKTRACK = 0.5


class Variant(enum.Enum):
    SHORT = "short"
    LONG = "long"


class StepMode(enum.Enum):
    THEORY = "theory"
    PRACTICAL = "practical"


class Status(enum.Enum):
    CONVERGED = "converged"
    ITERATION_LIMIT = "iteration-limit"
    AUDIT_VIOLATION = "audit-violation"
    NUMERICAL_BREAKDOWN = "numerical-breakdown"


@dataclass(frozen=True)
class SolverConfig:
    """Algorithm parameters. The defaults are the certified constants.

    ``delta`` defaults to 0.3 for the short-step and 0.05 for the long-step
    variant and overrides ``inexact.delta``.
    """

    variant: Variant = Variant.SHORT
    theta: float = 0.1
    beta: float = 0.1
    gamma: float = 0.5
    sigma_long: float = 0.5
    delta: float = None
    epsilon: float = 1e-6
    max_iters: int = None
    inexact: InexactnessPolicy = field(default_factory=InexactnessPolicy)
    step_mode: StepMode = StepMode.THEORY
    audit: bool = False

    def __post_init__(self):
        if self.delta is None:
            object.__setattr__(self, "delta", 0.3 if self.variant is Variant.SHORT else 0.05)
        for name in ("theta", "beta", "gamma", "sigma_long"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")
        if self.variant is Variant.SHORT and self.audit and self.eta <= 0.0:
            raise ParamsInfeasible(
                f"eta = beta (1 - 2 delta - 0.38) = {self.eta:.4g} <= 0; no contraction can be audited"
            )

    @property
    def eta(self):
        return bounds.shortstep_eta(self.beta, self.delta)

    @property
    def policy(self):
        return dataclasses.replace(self.inexact, delta=self.delta)

    def default_max_iters(self, n, mu0):
        if mu0 <= self.epsilon:
            return 0
        log_ratio = math.log(mu0 / self.epsilon)
        if self.variant is Variant.SHORT:
            eta = self.eta if self.eta > 0 else 1e-3
            return 20 * math.ceil(math.sqrt(n) * log_ratio / eta)
        return 20 * math.ceil(log_ratio / (0.1 * bounds.alpha_hat(n)))


@dataclass(frozen=True)
class TraceRecord:
    """Observables of one outer iteration.

    ``prox2`` is ``||XSe - mu e||_2 / mu`` and ``primal_res``/``dual_res`` are
    relative residuals, all at the new point. ``lemma_slack`` is the smallest
    ``(bound - measured) / mu`` over the bounds active for the variant,
    ``mu`` being the gap before the step.
    """

    iter: int
    mu: float
    sigma: float
    alpha: float
    r_ratio: float
    prox2: float
    min_ratio: float
    max_ratio: float
    primal_res: float
    dual_res: float
    dxds: float
    lemma_slack: float
    # not part of the CSV trace
    mu_prev: float = 0.0
    mu_predicted: float = 0.0
    dxQdx: float = 0.0
    dxds_scale: float = 0.0
    lemma_ratio: float = 0.0
    etr: float = 0.0
    inner_iterations: int = 0
    ry_norm: float = 0.0
    xi_norm: float = 0.0


CSV_FIELDS = (
    "iter",
    "mu",
    "sigma",
    "alpha",
    "r_ratio",
    "prox2",
    "min_ratio",
    "max_ratio",
    "primal_res",
    "dual_res",
    "dxds",
    "lemma_slack",
)


@dataclass(frozen=True)
class SolveResult:
    status: Status
    final: Iterate
    iterations: int
    trace: list
    message: str = ""

    @property
    def converged(self):
        return self.status is Status.CONVERGED


def mu_after_step(it, direction, sigma, alpha):
    """Average gap after a step of length ``alpha``, from the closed form."""
    n = it.n
    return (
        (1.0 - alpha * (1.0 - sigma)) * it.mu
        + alpha * float(direction.r.sum()) / n
        + alpha**2 * float(direction.dx @ direction.ds) / n
    )


def longstep_alpha_bounds(n, gamma, sigma, delta):
    """Stepsize limits ``(a1, a2, a3, alpha_max)`` of the long-step method.

    Raises
    ------
    ParamsInfeasible
        If no positive stepsize satisfies all three conditions.
    """
    a1, a2, a3 = bounds.alpha_bounds(n, gamma, sigma, delta)
    alpha_max = min(a1, a2, a3, 1.0)
    if alpha_max <= 0.0:
        raise ParamsInfeasible(
            f"no admissible stepsize for gamma={gamma}, sigma={sigma}, delta={delta}: "
            f"a1={a1:.4g}, a2={a2:.4g}, a3={a3:.4g}"
        )
    return a1, a2, a3, alpha_max


class _Audit:
    """Collects (name, measured, bound) triples and raises on the first violation."""

    def __init__(self, enabled, k):
        self.enabled = enabled
        self.k = k
        self.slacks = []

    def check(self, name, measured, bound, slack=AUDIT_SLACK, lemma_scale=None):
        if lemma_scale is not None:
            self.slacks.append((bound - measured) / lemma_scale)
        if self.enabled and not measured <= bound + slack:
            raise AuditViolation(f"iteration {self.k}: {name}: measured {measured:.17g} > bound {bound:.17g}")

    def require(self, name, ok):
        if self.enabled and not ok:
            raise AuditViolation(f"iteration {self.k}: {name}")

    @property
    def lemma_slack(self):
        return min(self.slacks) if self.slacks else math.inf


def _trial_point(it, direction, alpha):
    x = it.x + alpha * direction.dx
    s = it.s + alpha * direction.ds
    if not (np.all(x > 0) and np.all(s > 0)):
        return None
    return Iterate(x, it.y + alpha * direction.dy, s)


def _direction(problem, it, tgt, cfg, rng, audit):
    direction = compute_direction(problem, it, tgt, cfg.policy, rng)
    audit.check(f"residual contract ||r||_{tgt.norm_p.name}/||xi||", direction.r_norm_ratio, cfg.delta)
    if cfg.inexact.mode is InexactMode.ITERATIVE:
        audit.check("inner solver r_y", direction.ry_norm, RY_TOL * (1.0 + tgt.xi_norm), slack=0.0)
    return direction


def _common_record_checks(problem, it, new, direction, sigma, alpha, audit):
    """Feasibility, identity and prediction checks shared by both variants."""
    feas, mu_new = measure(problem, new)
    audit.check("primal feasibility (relative)", feas.primal_rel, feas.tol, slack=0.0)
    audit.check("dual feasibility (relative)", feas.dual_rel, feas.tol, slack=0.0)

    predicted = mu_after_step(it, direction, sigma, alpha)
    audit.check("mu(alpha) prediction", abs(predicted - mu_new), MU_CONSISTENCY_TOL * mu_new, slack=0.0)

    dxds = float(direction.dx @ direction.ds)
    qdx = problem.Q @ direction.dx
    dxqdx = float(direction.dx @ qdx)
    scale = float(np.linalg.norm(direction.dx) * (np.linalg.norm(direction.ds) + np.linalg.norm(qdx)))
    audit.check("dx'ds = dx'Q dx", abs(dxds - dxqdx), DXDS_IDENTITY_TOL * scale, slack=0.0)
    audit.check("dx'ds >= 0", -dxds, AUDIT_SLACK * max(scale, 1.0), slack=0.0)
    audit.require("strict monotonic decrease of mu", mu_new < it.mu)
    return feas, mu_new, predicted, dxds, dxqdx, scale


def shortstep_iteration(problem, it, cfg, rng=None, k=0):
    """One full Newton step inside N2(theta) with sigma = 1 - beta/sqrt(n)."""
    n = it.n
    mu = it.mu
    audit = _Audit(cfg.audit, k)
    sigma = bounds.shortstep_sigma(n, cfg.beta)
    tgt = assemble_target(it, sigma, NormTag.TWO)
    direction = _direction(problem, it, tgt, cfg, rng, audit)

    alpha = 1.0
    new = _trial_point(it, direction, alpha)
    if new is None:
        msg = f"iteration {k}: full step left the positive orthant"
        raise AuditViolation(msg) if cfg.audit else NumericalBreakdown(msg)

    l1, linf, _ = second_order_diagnostics(direction)
    second = float(np.linalg.norm(direction.dx * direction.ds))
    lemma1 = bounds.shortstep_second_order_bound(cfg.theta, cfg.beta, cfg.delta, mu)
    audit.check("||dX dS e||_2 bound", second, lemma1, lemma_scale=mu)
    etr = float(direction.r.sum()) / n
    audit.check("|e'r/n| bound", abs(etr), bounds.shortstep_etr_bound(n, cfg.theta, cfg.beta, cfg.delta, mu), lemma_scale=mu)

    feas, mu_new, predicted, dxds, dxqdx, scale = _common_record_checks(
        problem, it, new, direction, sigma, alpha, audit
    )
    audit.check("gap contraction (1 - eta/sqrt(n))", mu_new, (1.0 - cfg.eta / math.sqrt(n)) * mu, lemma_scale=mu)
    prox = proximity(new)
    audit.require(f"new point outside N2({cfg.theta})", in_n2(new, cfg.theta, slack=AUDIT_SLACK))

    rec = TraceRecord(
        iter=k,
        mu=mu_new,
        sigma=sigma,
        alpha=alpha,
        r_ratio=direction.r_norm_ratio,
        prox2=prox.norm2_dev / prox.mu,
        min_ratio=prox.min_ratio,
        max_ratio=prox.max_ratio,
        primal_res=feas.primal_rel,
        dual_res=feas.dual_rel,
        dxds=dxds,
        lemma_slack=audit.lemma_slack,
        mu_prev=mu,
        mu_predicted=predicted,
        dxQdx=dxqdx,
        dxds_scale=scale,
        lemma_ratio=second / lemma1 if lemma1 > 0 else 0.0,
        etr=etr,
        inner_iterations=direction.inner_iterations,
        ry_norm=direction.ry_norm,
        xi_norm=tgt.xi_norm,
    )
    return new, rec


def _accept_long(it, direction, alpha, gamma):
    trial = _trial_point(it, direction, alpha)
    if trial is None:
        return None
    if trial.mu <= (1.0 - 0.1 * alpha) * it.mu and in_ns(trial, gamma):
        return trial
    return None


def longstep_iteration(problem, it, cfg, rng=None, k=0):
    """One damped Newton step inside N_S(gamma) with sigma = ``cfg.sigma_long``."""
    n = it.n
    mu = it.mu
    audit = _Audit(cfg.audit, k)
    sigma = cfg.sigma_long
    a_hat = bounds.alpha_hat(n)
    *_, alpha_max = longstep_alpha_bounds(n, cfg.gamma, sigma, cfg.delta)
    if a_hat > alpha_max:
        raise ParamsInfeasible(f"alpha_hat = {a_hat:.4g} exceeds the admissible stepsize {alpha_max:.4g}")

    tgt = assemble_target(it, sigma, NormTag.INF)
    direction = _direction(problem, it, tgt, cfg, rng, audit)

    if cfg.step_mode is StepMode.THEORY:
        alpha = a_hat
        new = _trial_point(it, direction, alpha)
        if new is None:
            msg = f"iteration {k}: step alpha_hat left the positive orthant"
            raise AuditViolation(msg) if cfg.audit else NumericalBreakdown(msg)
    else:
        alpha = 1.0
        new = _accept_long(it, direction, alpha, cfg.gamma)
        while new is None and alpha > a_hat:
            alpha = max(alpha * BACKTRACK, a_hat)
            new = _accept_long(it, direction, alpha, cfg.gamma)
        if new is None:
            raise StepsizeUnderflow(f"iteration {k}: even alpha_hat = {a_hat:.4g} was rejected")

    C = bounds.longstep_constant(cfg.gamma, sigma, cfg.delta)
    l1, _, _ = second_order_diagnostics(direction)
    max_prod = float(np.max(direction.dx * direction.ds))
    audit.check("||dX dS e||_1 bound", l1, n * C * mu, lemma_scale=mu)
    audit.check("max_j dx_j ds_j bound", max_prod, C * mu, lemma_scale=mu)

    feas, mu_new, predicted, dxds, dxqdx, scale = _common_record_checks(
        problem, it, new, direction, sigma, alpha, audit
    )
    audit.check("gap contraction (1 - 0.1 alpha)", mu_new, (1.0 - 0.1 * alpha) * mu, lemma_scale=mu)
    prox = proximity(new)
    audit.require(f"new point outside N_S({cfg.gamma})", in_ns(new, cfg.gamma, slack=AUDIT_SLACK))

    rec = TraceRecord(
        iter=k,
        mu=mu_new,
        sigma=sigma,
        alpha=alpha,
        r_ratio=direction.r_norm_ratio,
        prox2=prox.norm2_dev / prox.mu,
        min_ratio=prox.min_ratio,
        max_ratio=prox.max_ratio,
        primal_res=feas.primal_rel,
        dual_res=feas.dual_rel,
        dxds=dxds,
        lemma_slack=audit.lemma_slack,
        mu_prev=mu,
        mu_predicted=predicted,
        dxQdx=dxqdx,
        dxds_scale=scale,
        lemma_ratio=max(l1 / (n * C * mu), max_prod / (C * mu)),
        etr=float(direction.r.sum()) / n,
        inner_iterations=direction.inner_iterations,
        ry_norm=direction.ry_norm,
        xi_norm=tgt.xi_norm,
    )
    return new, rec


def check_start(problem, start, cfg):
    feas, _ = measure(problem, start)
    if not feas.feasible:
        raise StartOutsideNeighbourhood(
            f"start is not feasible: relative residuals {feas.primal_rel:.3g}, {feas.dual_rel:.3g}"
        )
    if cfg.variant is Variant.SHORT:
        if not in_n2(start, cfg.theta):
            raise StartOutsideNeighbourhood(f"start is outside N2({cfg.theta})")
    elif not in_ns(start, cfg.gamma):
        raise StartOutsideNeighbourhood(f"start is outside N_S({cfg.gamma})")


def run(problem, start, cfg):
    """Iterate from ``start`` until ``mu <= cfg.epsilon`` or the iteration cap.

    Raises
    ------
    StartOutsideNeighbourhood
        If ``start`` is infeasible or outside the variant's neighbourhood.
    """
    check_start(problem, start, cfg)
    step = shortstep_iteration if cfg.variant is Variant.SHORT else longstep_iteration
    max_iters = cfg.max_iters if cfg.max_iters is not None else cfg.default_max_iters(problem.n, start.mu)
    rng = np.random.default_rng(cfg.inexact.seed)

    it = start
    trace = []
    k = 0
    status, message = Status.ITERATION_LIMIT, ""
    while True:
        if it.mu <= cfg.epsilon:
            status = Status.CONVERGED
            break
        if k >= max_iters:
            message = f"reached {max_iters} iterations with mu = {it.mu:.3e}"
            break
        try:
            it, rec = step(problem, it, cfg, rng=rng, k=k + 1)
        except AuditViolation as exc:
            status, message = Status.AUDIT_VIOLATION, str(exc)
            break
        except (NumericalBreakdown, SingularSystem, MaxInnerIterations, StepsizeUnderflow) as exc:
            status, message = Status.NUMERICAL_BREAKDOWN, f"{type(exc).__name__}: {exc}"
            break
        trace.append(rec)
        k += 1
        logger.debug("iter %d mu %.3e alpha %.3e r %.3f", k, rec.mu, rec.alpha, rec.r_ratio)
    if status is not Status.CONVERGED:
        logger.info("stopped: %s %s", status.value, message)
    return SolveResult(status=status, final=it, iterations=k, trace=trace, message=message)
