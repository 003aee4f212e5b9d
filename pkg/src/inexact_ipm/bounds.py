"""Closed-form constants and bounds from the complexity analysis.

Everything here is scalar arithmetic. Bounds on mu-scaled quantities are
returned in units of mu unless a ``mu`` argument is taken.
"""

import math


def shortstep_sigma(n, beta):
    return 1.0 - beta / math.sqrt(n)


def shortstep_eta(beta, delta):
    """Per-iteration contraction constant: mu_new <= (1 - eta/sqrt(n)) mu."""
    return beta * (1.0 - 2.0 * delta - 0.38)


def shortstep_second_order_bound(theta, beta, delta, mu):
    """Upper bound on ||dX dS e||_2 for a direction computed in N2(theta)."""
    return (1.0 + delta) ** 2 * (theta**2 + beta**2) / (1.0 - theta) * mu


def shortstep_etr_bound(n, theta, beta, delta, mu):
    """Upper bound on |e'r / n| when ||r||_2 <= delta ||xi||_2 in N2(theta).

    Equals sqrt(2) delta theta mu / sqrt(n) when theta == beta.
    """
    return delta * math.sqrt(theta**2 + beta**2) * mu / math.sqrt(n)


def shortstep_certificate(n, theta, beta, delta):
    """Both sides of the scalar inequality that certifies (theta, beta, delta).

    Returns ``(lhs, rhs)``; the parameters are certified for ``n`` iff
    ``lhs <= rhs``. At theta == beta == 0.1 this is
    ``sqrt(2) delta (1 + theta/sqrt(n)) + 2 (1 + delta)^2 / 9 <= 1 - beta/sqrt(n)``.
    """
    root_n = math.sqrt(n)
    ratio = math.sqrt(theta**2 + beta**2) / theta
    lhs = delta * ratio * (1.0 + theta / root_n) + (1.0 + delta) ** 2 * (theta**2 + beta**2) / ((1.0 - theta) * theta)
    rhs = 1.0 - beta / root_n
    return lhs, rhs


def longstep_constant(gamma, sigma, delta):
    """(1 + delta)^2 / gamma * (1/gamma - sigma)^2; 4.96125 at gamma=sigma=0.5, delta=0.05."""
    return (1.0 + delta) ** 2 / gamma * (1.0 / gamma - sigma) ** 2


def longstep_xi_bound(gamma, sigma):
    """||xi||_inf <= (1/gamma - sigma) mu inside N_S(gamma)."""
    return 1.0 / gamma - sigma


def alpha_bounds(n, gamma, sigma, delta):
    """Largest stepsizes allowed by each of the three linear stepsize conditions.

    Returns ``(a1, a2, a3)``. ``a1`` and ``a2`` keep the new point in
    N_S(gamma), ``a3`` guarantees ``mu(alpha) <= (1 - 0.1 alpha) mu``.
    Non-positive values mean no positive stepsize satisfies that condition.
    """
    C = longstep_constant(gamma, sigma, delta)
    w = 1.0 / gamma - sigma
    a1 = (sigma * (1.0 - gamma) - delta * (1.0 + gamma) * w) / ((gamma + n) * C)
    a2 = ((1.0 / gamma - 1.0) * sigma - delta * (1.0 + 1.0 / gamma) * w) / C
    a3 = (0.9 - sigma - delta * w) / C
    return a1, a2, a3


def alpha_hat(n):
    return 1.0 / (50.0 * n)
