"""
Long-step method: certified versus backtracked stepsizes
========================================================

The long-step method works in the wide neighbourhood N_S(gamma). The
certified stepsize 1/(50n) is safe but slow; a backtracking rule that keeps
the same acceptance test is much faster in practice.
"""

from inexact_ipm import (
    NS,
    GenSpec,
    InexactMode,
    InexactnessPolicy,
    InjectShape,
    SolverConfig,
    StepMode,
    Variant,
    generate,
    longstep_alpha_bounds,
    perturb_within,
    rebuild_cost,
    run,
)

n = 6
a1, a2, a3, alpha_max = longstep_alpha_bounds(n, 0.5, 0.5, 0.05)
print(f"admissible stepsizes a1={a1:.5f} a2={a2:.5f} a3={a3:.5f}; certified 1/(50n)={1 / (50 * n):.5f}")

# Start away from the central path: spread the products x_j s_j over 80% of
# the allowed box, then rebuild c so the point stays dual feasible.
problem, start = generate(GenSpec(n=n, m=3, seed=2))
start = perturb_within(start, NS(0.5), 0.8, seed=1)
problem = rebuild_cost(problem, start)

policy = InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ADVERSARIAL_SIGN)
for mode in (StepMode.THEORY, StepMode.PRACTICAL):
    cfg = SolverConfig(variant=Variant.LONG, step_mode=mode, epsilon=1e-3, inexact=policy, audit=True)
    result = run(problem, start, cfg)
    alphas = [rec.alpha for rec in result.trace]
    print(f"{mode.value:9s} {result.status.value} after {result.iterations} iterations,"
          f" alpha in [{min(alphas):.4g}, {max(alphas):.4g}]")
