import numpy as np
import pytest

from inexact_ipm import GenSpec, Iterate, QpProblem, generate


@pytest.fixture
def tiny_lp():
    """n=2 LP: A = [1 1], Q = 0, start x = s = (1, 1), y = 0."""
    A = np.array([[1.0, 1.0]])
    Q = np.zeros((2, 2))
    x = np.ones(2)
    s = np.ones(2)
    y = np.zeros(1)
    problem = QpProblem(A, Q, A @ x, A.T @ y + s)
    return problem, Iterate(x, y, s)


@pytest.fixture(params=[0, 1, 2])
def small_qp(request):
    return generate(GenSpec(n=6, m=3, seed=request.param))

