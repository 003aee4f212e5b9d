"""Proximity to the central path and neighbourhood membership.

Both neighbourhoods are closed: points on the boundary are members. Only the
complementarity condition is tested here; feasibility is checked by
:func:`inexact_ipm.qp_model.measure`.
"""

from dataclasses import dataclass

import numpy as np

RELAXED_SLACK = 1e-12


@dataclass(frozen=True)
class ProximityReport:
    norm2_dev: float
    min_ratio: float
    max_ratio: float
    mu: float


def proximity(it):
    p = it.products
    mu = it.mu
    return ProximityReport(
        norm2_dev=float(np.linalg.norm(p - mu)),
        min_ratio=float(p.min() / mu),
        max_ratio=float(p.max() / mu),
        mu=mu,
    )


def in_n2(it, theta, slack=0.0):
    """``||XSe - mu e||_2 <= theta mu`` (plus an absolute ``slack``)."""
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    rep = proximity(it)
    return rep.norm2_dev <= theta * rep.mu + slack


def in_ns(it, gamma, slack=0.0):
    """``gamma mu <= x_j s_j <= mu / gamma`` for every j."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    rep = proximity(it)
    return rep.min_ratio >= gamma - slack and rep.max_ratio <= 1.0 / gamma + slack


def in_n2_relaxed(it, theta):
    return in_n2(it, theta, slack=RELAXED_SLACK)


def in_ns_relaxed(it, gamma):
    return in_ns(it, gamma, slack=RELAXED_SLACK)


@dataclass(frozen=True)
class N2:
    theta: float = 0.1

    def contains(self, it, slack=0.0):
        return in_n2(it, self.theta, slack)


@dataclass(frozen=True)
class NS:
    gamma: float = 0.5

    def contains(self, it, slack=0.0):
        return in_ns(it, self.gamma, slack)
