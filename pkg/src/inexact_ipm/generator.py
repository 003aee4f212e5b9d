"""Random feasible QP instances with an exactly central starting point.

The start is sampled first and ``b``, ``c`` are derived from it, so the
instance is feasible and the start lies on the central path by construction.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import MarginOutOfRange, RankResampleExhausted
from .neighborhood import N2, NS
from .qp_model import DENSE_LIMIT, Iterate, QpProblem, numerical_rank, validate

MAX_RANK_ATTEMPTS = 10


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    density: float = 1.0
    q_rank: int = None  # None means full rank n; 0 gives an LP
    mu0: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if not 0.0 < self.density <= 1.0:
            raise ValueError("density must lie in (0, 1]")
        if self.q_rank is not None and not 0 <= self.q_rank <= self.n:
            raise ValueError("q_rank must lie in [0, n]")
        if not self.mu0 > 0.0:
            raise ValueError("mu0 must be positive")

    @property
    def rank_of_q(self):
        return self.n if self.q_rank is None else self.q_rank


def _sample_matrix(rng, rows, cols, density):
    if density >= 1.0:
        return rng.standard_normal((rows, cols))
    return sp.random(rows, cols, density=density, format="csc", random_state=rng, data_rvs=rng.standard_normal)


def generate(spec):
    """Build ``(problem, start)`` from ``spec``.

    Raises
    ------
    RankResampleExhausted
        If no full-row-rank ``A`` was drawn in ``MAX_RANK_ATTEMPTS`` tries.
    """
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n, spec.m
    for _ in range(MAX_RANK_ATTEMPTS):
        A = _sample_matrix(rng, m, n, spec.density)
        if numerical_rank(A) == m:
            break
    else:
        raise RankResampleExhausted(
            f"no full-rank {m}x{n} A with density {spec.density} after {MAX_RANK_ATTEMPTS} draws"
        )

    k = spec.rank_of_q
    if k == 0:
        Q = sp.csc_matrix((n, n)) if n > DENSE_LIMIT else np.zeros((n, n))
    else:
        G = _sample_matrix(rng, k, n, spec.density)
        Q = G.T @ G
        # exact symmetry, so symmetric Matrix Market storage round-trips
        Q = 0.5 * (Q + Q.T)
        if sp.issparse(Q):
            Q = sp.csc_matrix(Q)

    x = rng.uniform(0.5, 2.0, n)
    s = spec.mu0 / x
    y = rng.standard_normal(m)
    b = A @ x
    c = A.T @ y + s - Q @ x
    problem = QpProblem(A, Q, b, c)
    validate(problem)
    return problem, Iterate(x, y, s)


def rebuild_cost(problem, it):
    """Instance whose ``c`` makes ``it`` dual feasible: ``c = A'y + s - Qx``."""
    c = problem.A.T @ it.y + it.s - problem.Q @ it.x
    return problem.with_cost(c)


def _n2_products(mu, n, margin, theta, rng):
    w = rng.standard_normal(n)
    w -= w.mean()
    w /= np.linalg.norm(w)
    return mu * (1.0 + margin * theta * w)


def _ns_products(mu, n, margin, gamma, rng):
    # symmetric spread keeps the mean at mu; the lower side of the box binds
    d = margin * (1.0 - gamma)
    q = np.ones(n)
    half = n // 2
    idx = rng.permutation(n)
    q[idx[:half]] = 1.0 - d
    q[idx[n - half :]] = 1.0 + d
    return mu * q


def perturb_within(it, target, margin, seed=0):
    """Move ``it`` off the central path to a fraction ``margin`` of the boundary.

    Only ``s`` changes; ``mu`` is kept. For ``N2(theta)`` the result has
    ``||XSe - mu e|| = margin theta mu``; for ``NS(gamma)`` the ratios
    ``x_j s_j / mu`` span ``[1 - margin(1 - gamma), 1 + margin(1 - gamma)]``.
    The caller must pair the result with :func:`rebuild_cost` to keep the
    instance dual feasible.
    """
    if not 0.0 <= margin <= 1.0:
        raise MarginOutOfRange(f"margin must lie in [0, 1], got {margin}")
    if margin == 0.0:
        return it
    rng = np.random.default_rng(seed)
    n, mu = it.n, it.mu
    if isinstance(target, N2):
        p = _n2_products(mu, n, margin, target.theta, rng)
    elif isinstance(target, NS):
        p = _ns_products(mu, n, margin, target.gamma, rng)
    else:
        raise TypeError(f"unsupported neighbourhood {target!r}")
    new = Iterate(it.x, it.y, p / it.x)
    # roundoff can put an exact-boundary point a few ulps outside
    shrink = 1.0
    while not target.contains(new):
        shrink *= 1.0 - 4 * np.finfo(float).eps
        new = Iterate(it.x, it.y, (mu + shrink * (p - mu)) / it.x)
    return new
