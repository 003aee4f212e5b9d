"""
How inexact can a Newton direction be?
======================================

The third block of the Newton system may carry a residual r with
||r|| <= delta ||xi||. This script compares residual shapes and the
iterative inner solver on one instance.
"""

from inexact_ipm import (
    GenSpec,
    InexactMode,
    InexactnessPolicy,
    InjectShape,
    SolverConfig,
    generate,
    run,
)

problem, start = generate(GenSpec(n=16, m=8, seed=11))

policies = {
    "exact": InexactnessPolicy(),
    "random direction": InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.RANDOM_SPHERE, seed=5),
    "worst sign": InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ADVERSARIAL_SIGN),
    "along xi": InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ALIGNED_WITH_XI),
    "projected CG": InexactnessPolicy(InexactMode.ITERATIVE),
}

# delta = 0.3 is the largest forcing value the short-step certificate allows
# at theta = beta = 0.1.
for name, policy in policies.items():
    result = run(problem, start, SolverConfig(delta=0.3, epsilon=1e-6, inexact=policy, audit=True))
    inner = sum(rec.inner_iterations for rec in result.trace)
    print(f"{name:18s} {result.status.value:10s} iterations {result.iterations:5d}  inner {inner}")

# The sign-of-xi residual raises e'r and therefore the next gap, so it costs
# the most outer iterations. The CG solver stops as soon as the residual test
# passes, which here takes only a handful of inner steps per outer step.
