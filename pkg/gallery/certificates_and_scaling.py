"""
Parameter certificates and iteration-count scaling
==================================================

Check the scalar inequalities behind the default parameters, then measure
how the iteration count grows with n and fit a power law.
"""

from inexact_ipm import Variant, bounds
from inexact_ipm.analysis import (
    certify_alpha_hat,
    certify_shortstep_params,
    predicted_shortstep_iterations,
    scaling_experiment,
)

sizes = [2, 3, 5, 10, 100, 1000, 10**6]

# Short-step: delta = 0.3 passes at every size, delta = 0.5 does not.
for delta in (0.3, 0.5):
    rep = certify_shortstep_params(0.1, 0.1, delta, sizes)
    print(f"short-step delta={delta}: passed={rep.passed} worst slack {rep.worst_slack:+.4f} at n={rep.worst_n}")

# Long-step: the constant in the second-order bound and the margin of 1/(50n).
print("long-step constant", bounds.longstep_constant(0.5, 0.5, 0.05))
rep = certify_alpha_hat(0.5, 0.5, 0.05, sizes)
for n, slack in zip(rep.sizes, rep.slacks):
    print(f"  n={n:8d}  smallest margin {slack:.3e}")

# Exact short-step iterations on LP-shaped instances follow mu_k = sigma^k mu0,
# so the count grows like sqrt(n).
scal = scaling_experiment(Variant.SHORT, [16, 64, 256], 1e-3)
for n, L in zip(scal.sizes, scal.iterations):
    print(f"n={n:4d} iterations {L:6.0f} (LP prediction {predicted_shortstep_iterations(n, 1.0, 1e-3)})")
print(f"fitted exponent {scal.fitted_exponent:.3f}")
