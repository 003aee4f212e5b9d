"""Exact and inexact Newton directions.

The direction solves

    [ A   0   0 ] [dx]   [   0  ]
    [-Q   A'  I ] [dy] = [   0  ]
    [ S   0   X ] [ds]   [xi + r]

with ``xi = sigma mu e - XSe``. The first two block rows are satisfied to
roundoff in every mode; inexactness lives in ``r`` only. All modes go through
the augmented system obtained by eliminating ``ds``:

    [-Q - X^{-1}S   A'] [dx]   [-X^{-1}(xi + r)]
    [     A         0 ] [dy] = [       0       ]
"""

import enum
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import MaxInnerIterations, SingularSystem


class NormTag(enum.Enum):
    TWO = 2
    INF = np.inf

    def norm(self, v):
        return float(np.linalg.norm(v, self.value)) if v.size else 0.0


class InexactMode(enum.Enum):
    EXACT = "exact"
    INJECT = "inject"
    ITERATIVE = "iterative"


class InjectShape(enum.Enum):
    RANDOM_SPHERE = "random-sphere"
    ADVERSARIAL_SIGN = "adversarial-sign"
    ALIGNED_WITH_XI = "aligned"


@dataclass(frozen=True)
class InexactnessPolicy:
    """How the third-block residual ``r`` is produced.

    ``delta`` is the forcing parameter: ``||r||_p <= delta ||xi||_p``.
    """

    mode: InexactMode = InexactMode.EXACT
    delta: float = 0.0
    inject_shape: InjectShape = InjectShape.RANDOM_SPHERE
    inject_fraction: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")
        if not 0.0 <= self.inject_fraction <= 1.0:
            raise ValueError(f"inject_fraction must lie in [0, 1], got {self.inject_fraction}")


@dataclass(frozen=True)
class NewtonTarget:
    xi: np.ndarray
    sigma: float
    norm_p: NormTag
    mu: float

    @property
    def xi_norm(self):
        return self.norm_p.norm(self.xi)


@dataclass(frozen=True)
class NewtonDirection:
    dx: np.ndarray
    dy: np.ndarray
    ds: np.ndarray
    r: np.ndarray
    r_norm_ratio: float
    inner_iterations: int = 0
    # ||A dx||_2 at return; the iterative solver's r_y
    ry_norm: float = 0.0


def assemble_target(it, sigma, p=NormTag.TWO):
    if not 0.0 < sigma <= 1.0:
        raise ValueError(f"sigma must lie in (0, 1], got {sigma}")
    xi = sigma * it.mu - it.products
    return NewtonTarget(xi=xi, sigma=sigma, norm_p=p, mu=it.mu)


def _ratio(r, tgt):
    xn = tgt.xi_norm
    return tgt.norm_p.norm(r) / xn if xn > 0 else 0.0


def _augmented_matrix(problem, it):
    theta_inv = it.s / it.x
    if problem.is_sparse:
        H = problem.Q + sp.diags(theta_inv)
        return sp.bmat([[-H, problem.A.T], [problem.A, None]], format="csc")
    n, m = problem.n, problem.m
    K = np.zeros((n + m, n + m))
    K[:n, :n] = -problem.Q
    K[np.arange(n), np.arange(n)] -= theta_inv
    K[:n, n:] = problem.A.T
    K[n:, :n] = problem.A
    return K


def _solve_augmented(problem, it, rhs3):
    """Solve the augmented system for third-block right-hand side ``rhs3``."""
    n = problem.n
    rhs = np.concatenate([-rhs3 / it.x, np.zeros(problem.m)])
    K = _augmented_matrix(problem, it)
    try:
        if problem.is_sparse:
            with warnings.catch_warnings():
                warnings.simplefilter("error", spla.MatrixRankWarning)
                sol = spla.splu(K).solve(rhs)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", la.LinAlgWarning)
                # symmetric indefinite (Bunch-Kaufman) factorization
                sol = la.solve(K, rhs, assume_a="sym", check_finite=False)
    except (la.LinAlgError, RuntimeError, spla.MatrixRankWarning) as exc:
        raise SingularSystem(f"augmented system factorization failed: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("augmented system solve produced non-finite values")
    dx, dy = sol[:n], sol[n:]
    ds = (rhs3 - it.s * dx) / it.x
    return dx, dy, ds


def solve_exact(problem, it, tgt):
    """Newton direction with ``r = 0``."""
    if not np.any(tgt.xi):
        z = np.zeros(problem.n)
        return NewtonDirection(z, np.zeros(problem.m), z.copy(), z.copy(), 0.0)
    dx, dy, ds = _solve_augmented(problem, it, tgt.xi)
    r = np.zeros(problem.n)
    return NewtonDirection(dx, dy, ds, r, 0.0, ry_norm=float(np.linalg.norm(problem.A @ dx)))


def choose_residual(tgt, policy, rng=None):
    """Residual vector with ``||r||_p = inject_fraction * delta * ||xi||_p``."""
    xi = tgt.xi
    size = policy.inject_fraction * policy.delta * tgt.xi_norm
    if size == 0.0:
        return np.zeros_like(xi)
    shape = policy.inject_shape
    if shape is InjectShape.ADVERSARIAL_SIGN:
        # pushes e'r up when xi < 0: the worst case for gap reduction
        v = -np.sign(xi)
    elif shape is InjectShape.ALIGNED_WITH_XI:
        v = xi.copy()
    elif shape is InjectShape.RANDOM_SPHERE:
        rng = np.random.default_rng(policy.seed) if rng is None else rng
        v = rng.standard_normal(xi.size)
    else:
        raise ValueError(f"unknown injection shape {shape!r}")
    return v * (size / tgt.norm_p.norm(v))


def inject_residual(problem, it, tgt, policy, rng=None):
    """Direction whose third block carries a residual of prescribed norm and shape."""
    r = choose_residual(tgt, policy, rng)
    if not np.any(tgt.xi + r):
        z = np.zeros(problem.n)
        return NewtonDirection(z, np.zeros(problem.m), z.copy(), r, _ratio(r, tgt))
    dx, dy, ds = _solve_augmented(problem, it, tgt.xi + r)
    return NewtonDirection(
        dx, dy, ds, r, _ratio(r, tgt), ry_norm=float(np.linalg.norm(problem.A @ dx))
    )


class _ScaledProjector:
    """Projection onto null(A D) with D = diag(d), from one Cholesky of A D^2 A'."""

    def __init__(self, A, d):
        self.Ad = A @ sp.diags(d) if sp.issparse(A) else A * d
        M = self.Ad @ self.Ad.T
        M = M.toarray() if sp.issparse(M) else M
        try:
            self.factor = la.cho_factor(M, lower=True, check_finite=False)
        except la.LinAlgError as exc:
            raise SingularSystem(f"A D^2 A' is not positive definite: {exc}") from exc

    def multipliers(self, v):
        """Least-squares y minimizing ||v - (AD)' y||."""
        return la.cho_solve(self.factor, self.Ad @ v, check_finite=False)

    def __call__(self, v):
        # two passes: the second removes what roundoff left in range(D A')
        for _ in range(2):
            v = v - self.Ad.T @ self.multipliers(v)
        return v


def solve_iterative(problem, it, tgt, policy):
    """Truncated projected conjugate gradients on the augmented system.

    Inner iterates keep ``dx`` in null(A), so ``r_y = A dx`` stays at
    roundoff level, and the iteration stops once ``||X r_x||_p <= delta ||xi||_p``.
    A diagonal scaling by ``diag(Q + X^{-1}S)^{-1/2}`` acts as preconditioner.
    """
    n, m = problem.n, problem.m
    xi_norm = tgt.xi_norm
    if xi_norm == 0.0:
        z = np.zeros(n)
        return NewtonDirection(z, np.zeros(m), z.copy(), z.copy(), 0.0, inner_iterations=0)

    theta_inv = it.s / it.x
    Q = problem.Q
    qdiag = Q.diagonal() if sp.issparse(Q) else np.diag(Q)
    d = 1.0 / np.sqrt(qdiag + theta_inv)
    proj = _ScaledProjector(problem.A, d)

    def hess(v):
        w = d * v
        return d * (Q @ w + theta_inv * w)

    g = d * (tgt.xi / it.x)
    weight = it.x / d  # maps the scaled residual to r = -X r_x
    p_norm = tgt.norm_p
    cap = 10 * (n + m)

    z = np.zeros(n)
    res = proj(g)
    direction = res.copy()
    rho = float(res @ res)
    k = 0
    while True:
        zc = proj(z)
        true_res = proj(g - hess(zc))
        ratio = p_norm.norm(weight * true_res) / xi_norm
        if ratio <= policy.delta:
            break
        if k >= cap:
            raise MaxInnerIterations(
                f"inner solver reached {cap} iterations at ||X r_x||/||xi|| = {ratio:.3e}",
                iterations=k,
                ratio=ratio,
            )
        if rho <= (np.finfo(float).eps * float(g @ g) ** 0.5) ** 2:
            # the Krylov residual is at roundoff; more steps cannot lower the true one
            raise MaxInnerIterations(
                f"inner solver stagnated after {k} iterations at ||X r_x||/||xi|| = {ratio:.3e}",
                iterations=k,
                ratio=ratio,
            )
        q = hess(direction)
        curv = float(direction @ q)
        if not curv > 0.0:
            raise SingularSystem("non-positive curvature in projected CG")
        step = rho / curv
        z = z + step * direction
        res = proj(res - step * q)
        rho_new = float(res @ res)
        direction = res + (rho_new / rho) * direction
        rho = rho_new
        k += 1

    dx = d * zc
    dy = proj.multipliers(hess(zc) - g)
    r = -weight * true_res
    ds = (tgt.xi + r - it.s * dx) / it.x
    return NewtonDirection(
        dx, dy, ds, r, ratio, inner_iterations=k, ry_norm=float(np.linalg.norm(problem.A @ dx))
    )


def compute_direction(problem, it, tgt, policy, rng=None):
    """Dispatch on ``policy.mode``."""
    if policy.mode is InexactMode.EXACT:
        return solve_exact(problem, it, tgt)
    if policy.mode is InexactMode.INJECT:
        return inject_residual(problem, it, tgt, policy, rng)
    if policy.mode is InexactMode.ITERATIVE:
        return solve_iterative(problem, it, tgt, policy)
    raise ValueError(f"unknown mode {policy.mode!r}")


def second_order_diagnostics(direction, it=None):
    """``(||dX dS e||_1, ||dX dS e||_inf, dx'ds)``."""
    prod = direction.dx * direction.ds
    absprod = np.abs(prod)
    return float(absprod.sum()), float(absprod.max(initial=0.0)), float(direction.dx @ direction.ds)


def block_residuals(problem, it, tgt, direction):
    """Norms of the three block residuals of the Newton system.

    The third is measured against ``xi + r`` so it is zero for a correct
    direction in every mode.
    """
    A, Q = problem.A, problem.Q
    dx, dy, ds = direction.dx, direction.dy, direction.ds
    r1 = A @ dx
    r2 = -(Q @ dx) + A.T @ dy + ds
    r3 = it.s * dx + it.x * ds - tgt.xi - direction.r
    return float(np.linalg.norm(r1)), float(np.linalg.norm(r2)), float(np.linalg.norm(r3))

