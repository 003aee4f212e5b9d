"""Parameter certification, bound tightness and iteration-count scaling."""

import dataclasses
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .generator import GenSpec, generate
from .ipm import SolverConfig, Status, StepMode, Variant, run

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CertReport:
    """Outcome of checking a scalar certificate at several sizes.

    ``slacks[i]`` is ``rhs - lhs`` (or the stepsize margin) at ``sizes[i]``;
    the certificate passes iff every slack is non-negative.
    """

    passed: bool
    worst_slack: float
    worst_n: int
    sizes: tuple
    slacks: tuple
    details: dict = dataclasses.field(default_factory=dict)


def _report(sizes, slacks, **details):
    slacks = tuple(float(s) for s in slacks)
    i = int(np.argmin(slacks))
    return CertReport(
        passed=all(s >= 0.0 for s in slacks),
        worst_slack=slacks[i],
        worst_n=int(sizes[i]),
        sizes=tuple(int(n) for n in sizes),
        slacks=slacks,
        details=details,
    )


def certify_shortstep_params(theta, beta, delta, n_samples):
    """Check the scalar inequality that makes a full step stay in N2(theta)."""
    for name, v in (("theta", theta), ("beta", beta), ("delta", delta)):
        if not 0.0 < v < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {v}")
    sides = [bounds.shortstep_certificate(n, theta, beta, delta) for n in n_samples]
    return _report(
        n_samples,
        [rhs - lhs for lhs, rhs in sides],
        lhs=tuple(l for l, _ in sides),
        rhs=tuple(r for _, r in sides),
        eta=bounds.shortstep_eta(beta, delta),
    )


def certify_alpha_hat(gamma, sigma, delta, n_list):
    """Check alpha_hat = 1/(50 n) against the three long-step stepsize conditions."""
    slacks, per_condition = [], []
    for n in n_list:
        a = bounds.alpha_bounds(n, gamma, sigma, delta)
        margins = tuple(ai - bounds.alpha_hat(n) for ai in a)
        per_condition.append(margins)
        slacks.append(min(margins))
    return _report(
        n_list,
        slacks,
        constant=bounds.longstep_constant(gamma, sigma, delta),
        condition_margins=tuple(per_condition),
    )


@dataclass(frozen=True)
class TightnessReport:
    ratios: tuple
    max_ratio: float
    median_ratio: float
    dxds: tuple
    status: Status


def lemma_tightness_sweep(problem, start, cfg, iters):
    """Run ``iters`` audited iterations and collect measured/bound ratios of
    the second-order bound active for the variant."""
    if not cfg.audit:
        raise ValueError("lemma_tightness_sweep needs cfg.audit = True")
    cfg = dataclasses.replace(cfg, max_iters=iters)
    result = run(problem, start, cfg)
    if result.status is Status.AUDIT_VIOLATION:
        logger.warning("audit violation during sweep: %s", result.message)
    ratios = tuple(rec.lemma_ratio for rec in result.trace)
    return TightnessReport(
        ratios=ratios,
        max_ratio=max(ratios, default=0.0),
        median_ratio=float(np.median(ratios)) if ratios else 0.0,
        dxds=tuple(rec.dxds for rec in result.trace),
        status=result.status,
    )


@dataclass(frozen=True)
class ScalingReport:
    sizes: tuple
    iterations: tuple
    fitted_exponent: float
    r_squared: float
    intercept: float = 0.0


def fit_power_law(sizes, iterations):
    """Least squares fit of ``log L = a + p log n``; returns ``(p, a, r_squared)``."""
    if len(sizes) < 3:
        raise ValueError(f"need at least 3 sizes for a fit, got {len(sizes)}")
    logn = np.log(np.asarray(sizes, dtype=float))
    logL = np.log(np.asarray(iterations, dtype=float))
    p, a = np.polyfit(logn, logL, 1)
    resid = logL - (a + p * logn)
    ss_tot = float(np.sum((logL - logL.mean()) ** 2))
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    return float(p), float(a), r2


def scaling_instance(n, seed):
    """LP-shaped instance used for scaling runs: m = n/4, sparse above n = 64."""
    density = 1.0 if n <= 64 else min(1.0, 8.0 / n)
    return generate(GenSpec(n=n, m=max(1, n // 4), density=density, q_rank=0 if n > 64 else None, seed=seed))


def scaling_experiment(variant, sizes, eps, trials=1, seed=0, config=None):
    """Average iteration counts over ``trials`` instances per size and fit the exponent.

    ``config`` supplies every solver setting except ``variant`` and
    ``epsilon``; it defaults to exact directions, theory stepsizes, no audit.
    """
    sizes = [int(n) for n in sizes]
    if len(sizes) < 3:
        raise ValueError(f"need at least 3 sizes for a fit, got {len(sizes)}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])) or sizes[0] < 2:
        raise ValueError("sizes must be strictly increasing and at least 2")
    base = config or SolverConfig(step_mode=StepMode.THEORY)
    cfg = dataclasses.replace(base, variant=variant, epsilon=eps, delta=None if config is None else base.delta)

    means = []
    for n in sizes:
        counts = []
        for t in range(trials):
            problem, start = scaling_instance(n, seed=seed + 1000 * t + n)
            result = run(problem, start, cfg)
            if result.status is not Status.CONVERGED:
                raise RuntimeError(f"n={n}, trial {t}: {result.status.value} {result.message}")
            counts.append(result.iterations)
        means.append(float(np.mean(counts)))
        logger.info("n=%d mean iterations %.1f", n, means[-1])
    p, a, r2 = fit_power_law(sizes, means)
    return ScalingReport(sizes=tuple(sizes), iterations=tuple(means), fitted_exponent=p, r_squared=r2, intercept=a)


def predicted_shortstep_iterations(n, mu0, eps, beta=0.1):
    """Iterations of the exact short-step method on an LP: mu_k = sigma^k mu0 exactly."""
    return math.ceil(math.log(mu0 / eps) / -math.log(1.0 - beta / math.sqrt(n)))
