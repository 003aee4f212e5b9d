"""
Short-step path following on a small QP
=======================================

Generate a convex QP with a known central starting point, run the
short-step method with exact Newton directions, and look at what the
trace records.
"""

import math

import numpy as np

from inexact_ipm import GenSpec, SolverConfig, generate, measure, proximity, run

# A random instance: 12 variables, 5 equality constraints, full-rank Q.
# The generator also returns a strictly feasible start with x_j s_j = mu0.
problem, start = generate(GenSpec(n=12, m=5, mu0=1.0, seed=3))
feas, mu = measure(problem, start)
print("start mu", mu, "feasible", feas.feasible)
print("start proximity", proximity(start))

# sigma = 1 - beta/sqrt(n) and the full step alpha = 1 keep every iterate in
# N2(theta). With audit=True each theoretical bound is checked as we go.
cfg = SolverConfig(epsilon=1e-6, audit=True)
result = run(problem, start, cfg)
print(result.status.value, "after", result.iterations, "iterations")

# Each step cuts mu by at least (1 - eta/sqrt(n)); eta is tiny at the
# certified constants, so the guaranteed rate is far slower than the one we see.
ratios = np.array([rec.mu / rec.mu_prev for rec in result.trace])
print("guaranteed ratio", 1 - cfg.eta / math.sqrt(problem.n))
print("observed ratios  min %.6f max %.6f" % (ratios.min(), ratios.max()))

# The second-order term never gets close to its bound.
print("largest measured/bound ratio", max(rec.lemma_ratio for rec in result.trace))

# Proximity stays well inside theta = 0.1 along the whole run.
print("largest ||XSe - mu e|| / mu", max(rec.prox2 for rec in result.trace))
