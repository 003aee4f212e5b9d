"""Problem data, iterates and feasibility measurements for the QP pair

    min  c'x + x'Qx/2   s.t.  Ax = b, x >= 0
    max  b'y - x'Qx/2   s.t.  A'y + s - Qx = c, s >= 0.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .errors import DimensionMismatch, NotPSD, NotSymmetric, RankDeficient

DENSE_LIMIT = 512
RANK_TOL = 1e-10
SYMMETRY_TOL = 1e-12
PSD_SHIFT = 1e-10
FEAS_TOL = 1e-8


def _as_matrix(M, dense):
    if dense:
        M = M.toarray() if sp.issparse(M) else np.array(M, dtype=float)
    else:
        M = sp.csc_matrix(M, dtype=float)
    return M


def _frozen(v):
    v = np.array(v, dtype=float).ravel()
    v.flags.writeable = False
    return v


def to_dense(M):
    return M.toarray() if sp.issparse(M) else np.asarray(M)


@dataclass(frozen=True, eq=False)
class QpProblem:
    """Convex QP in standard form.

    ``A`` and ``Q`` are stored dense when ``n <= DENSE_LIMIT`` and as CSC
    otherwise, unless ``storage`` forces one or the other.
    """

    A: object
    Q: object
    b: np.ndarray
    c: np.ndarray
    storage: str = "auto"

    def __post_init__(self):
        b, c = _frozen(self.b), _frozen(self.c)
        n = c.shape[0]
        if self.storage not in ("auto", "dense", "sparse"):
            raise ValueError(f"unknown storage {self.storage!r}")
        dense = self.storage == "dense" or (self.storage == "auto" and n <= DENSE_LIMIT)
        A, Q = _as_matrix(self.A, dense), _as_matrix(self.Q, dense)
        if dense:
            A.flags.writeable = False
            Q.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "storage", "dense" if dense else "sparse")

    @property
    def n(self):
        return self.c.shape[0]

    @property
    def m(self):
        return self.b.shape[0]

    @property
    def is_sparse(self):
        return self.storage == "sparse"

    def with_cost(self, c):
        """Same instance with the linear cost replaced."""
        return QpProblem(self.A, self.Q, self.b, c, storage=self.storage)


@dataclass(frozen=True, eq=False)
class Iterate:
    """Strictly interior primal-dual point; ``mu = x's/n``."""

    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    mu: float = field(init=False)

    def __post_init__(self):
        x, y, s = _frozen(self.x), _frozen(self.y), _frozen(self.s)
        if x.shape != s.shape:
            raise DimensionMismatch(f"x has length {x.size} but s has length {s.size}")
        if not (np.all(x > 0) and np.all(s > 0)):
            raise ValueError("iterate is not strictly interior (x > 0, s > 0 required)")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "mu", float(x @ s) / x.size)

    @property
    def n(self):
        return self.x.size

    @property
    def products(self):
        """The vector XSe."""
        return self.x * self.s

    def step(self, direction, alpha):
        return Iterate(
            self.x + alpha * direction.dx,
            self.y + alpha * direction.dy,
            self.s + alpha * direction.ds,
        )


@dataclass(frozen=True)
class ValidationReport:
    n: int
    m: int
    rank: int
    symmetry_error: float
    psd_shift: float


@dataclass(frozen=True)
class FeasibilityReport:
    primal_res: float
    dual_res: float
    primal_rel: float
    dual_rel: float
    tol: float = FEAS_TOL

    @property
    def primal_ok(self):
        return self.primal_rel <= self.tol

    @property
    def dual_ok(self):
        return self.dual_rel <= self.tol

    @property
    def feasible(self):
        return self.primal_ok and self.dual_ok


def numerical_rank(A, tol=RANK_TOL):
    """Rank from a column-pivoted QR of ``A'``; pivots below ``tol`` times the largest are dropped."""
    A = to_dense(A)
    if A.shape[0] == 0:
        return 0
    R = la.qr(A.T, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        return 0
    return int(np.sum(diag >= tol * diag[0]))


def validate(problem):
    """Check the prerequisites of the method, raising on the first failure.

    Returns
    -------
    ValidationReport
    """
    n, m = problem.n, problem.m
    if problem.A.shape != (m, n):
        raise DimensionMismatch(f"A is {problem.A.shape[0]}x{problem.A.shape[1]}, expected {m}x{n} from b, c")
    if problem.Q.shape != (n, n):
        raise DimensionMismatch(f"Q is {problem.Q.shape[0]}x{problem.Q.shape[1]}, expected {n}x{n}")
    if n < 2:
        raise DimensionMismatch(f"n = {n}; at least two variables are required")
    if m > n:
        raise DimensionMismatch(f"m = {m} exceeds n = {n}")

    rank = numerical_rank(problem.A)
    if rank < m:
        raise RankDeficient(f"A has numerical rank {rank} < m = {m}", rank=rank)

    Q = to_dense(problem.Q)
    asym = np.abs(Q - Q.T)
    qmax = np.max(np.abs(Q)) if Q.size else 0.0
    sym_err = float(np.max(asym)) / qmax if qmax > 0 else 0.0
    if sym_err > SYMMETRY_TOL:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        raise NotSymmetric(
            f"Q[{i},{j}] = {Q[i, j]!r} but Q[{j},{i}] = {Q[j, i]!r}",
            indices=(int(i), int(j)),
        )

    shift = PSD_SHIFT * max(np.trace(Q), 0.0) / n
    if qmax > 0:
        try:
            la.cholesky(0.5 * (Q + Q.T) + shift * np.eye(n), lower=True)
        except la.LinAlgError:
            raise NotPSD(f"Q + {shift:.3g} I is not positive definite") from None
    return ValidationReport(n=n, m=m, rank=rank, symmetry_error=sym_err, psd_shift=shift)


def measure(problem, it):
    """Feasibility residuals and average complementarity gap at ``it``."""
    if it.n != problem.n or it.y.size != problem.m:
        raise DimensionMismatch("iterate dimensions do not match the problem")
    rp = problem.A @ it.x - problem.b
    rd = problem.A.T @ it.y + it.s - problem.Q @ it.x - problem.c
    pres = float(np.linalg.norm(rp))
    dres = float(np.linalg.norm(rd))
    report = FeasibilityReport(
        primal_res=pres,
        dual_res=dres,
        primal_rel=pres / (1.0 + np.linalg.norm(problem.b)),
        dual_rel=dres / (1.0 + np.linalg.norm(problem.c)),
    )
    return report, it.mu


def objective_pair(problem, it):
    """Primal and dual objective values; their difference is x's on feasible points."""
    quad = 0.5 * float(it.x @ (problem.Q @ it.x))
    primal = float(problem.c @ it.x) + quad
    dual = float(problem.b @ it.y) - quad
    return primal, dual
