"""Independent reference computations used by the tests.

Nothing here calls into the solver paths it checks.
"""

import mpmath
import numpy as np
import scipy.sparse as sp

from inexact_ipm import GenSpec, generate

mpmath.mp.dps = 50


def dense(M):
    return M.toarray() if sp.issparse(M) else np.asarray(M)


def full_newton_solve(problem, it, rhs3):
    """Unstructured dense solve of the (2n+m) x (2n+m) Newton system."""
    n, m = problem.n, problem.m
    A, Q = dense(problem.A), dense(problem.Q)
    N = 2 * n + m
    J = np.zeros((N, N))
    J[:m, :n] = A
    J[m : m + n, :n] = -Q
    J[m : m + n, n : n + m] = A.T
    J[m : m + n, n + m :] = np.eye(n)
    J[m + n :, :n] = np.diag(it.s)
    J[m + n :, n + m :] = np.diag(it.x)
    rhs = np.concatenate([np.zeros(m + n), rhs3])
    sol = np.linalg.solve(J, rhs)
    return sol[:n], sol[n : n + m], sol[n + m :]


def mp_shortstep_slack(n, theta, beta, delta):
    """50-digit evaluation of rhs - lhs of the short-step certificate."""
    n, theta, beta, delta = (mpmath.mpf(v) for v in (n, theta, beta, delta))
    lhs = delta * mpmath.sqrt(theta**2 + beta**2) / theta * (1 + theta / mpmath.sqrt(n)) + (1 + delta) ** 2 * (
        theta**2 + beta**2
    ) / ((1 - theta) * theta)
    return 1 - beta / mpmath.sqrt(n) - lhs


def mp_printed_shortstep_lhs(n, theta, delta):
    """The inequality exactly as printed for theta = beta = 0.1."""
    n, theta, delta = (mpmath.mpf(v) for v in (n, theta, delta))
    return mpmath.sqrt(2) * delta * (1 + theta / mpmath.sqrt(n)) + 2 * (1 + delta) ** 2 / 9


def mp_alpha_margins(n, gamma, sigma, delta):
    """50-digit margins a_i - 1/(50 n) for the three stepsize conditions."""
    n, g, s, d = (mpmath.mpf(v) for v in (n, gamma, sigma, delta))
    C = (1 + d) ** 2 / g * (1 / g - s) ** 2
    w = 1 / g - s
    a1 = (s * (1 - g) - d * (1 + g) * w) / ((g + n) * C)
    a2 = ((1 / g - 1) * s - d * (1 + 1 / g) * w) / C
    a3 = (mpmath.mpf("0.9") - s - d * w) / C
    ah = 1 / (50 * n)
    return a1 - ah, a2 - ah, a3 - ah


def mu_direct(it, direction, alpha):
    x = it.x + alpha * direction.dx
    s = it.s + alpha * direction.ds
    return float(x @ s) / x.size


def random_instances(count, seed=0, max_n=10):
    """Generated (problem, start) pairs with random sizes, Q ranks and mu0."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = int(rng.integers(2, max_n + 1))
        m = int(rng.integers(1, n + 1))
        q_rank = int(rng.integers(0, n + 1))
        out.append(generate(GenSpec(n=n, m=m, q_rank=q_rank, mu0=float(rng.uniform(0.1, 10)), seed=seed * 1000 + k)))
    return out
