import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from inexact_ipm import (
    N2,
    NS,
    GenSpec,
    MarginOutOfRange,
    generate,
    in_n2,
    in_ns,
    measure,
    perturb_within,
    proximity,
    rebuild_cost,
    validate,
)


def test_same_seed_same_instance():
    a, sa = generate(GenSpec(n=9, m=4, seed=12))
    b, sb = generate(GenSpec(n=9, m=4, seed=12))
    np.testing.assert_array_equal(a.A, b.A)
    np.testing.assert_array_equal(a.Q, b.Q)
    np.testing.assert_array_equal(sa.x, sb.x)


def test_start_is_central_and_feasible():
    problem, start = generate(GenSpec(n=9, m=4, mu0=3.0, seed=1))
    np.testing.assert_allclose(start.products, 3.0, rtol=1e-15)
    assert np.all((start.x >= 0.5) & (start.x <= 2.0))
    feas, mu = measure(problem, start)
    assert feas.feasible and mu == pytest.approx(3.0)


@pytest.mark.parametrize("q_rank", [0, 1, 3, 6])
def test_q_rank(q_rank):
    problem, _ = generate(GenSpec(n=6, m=2, q_rank=q_rank, seed=q_rank))
    assert np.linalg.matrix_rank(problem.Q, tol=1e-9) == q_rank
    np.testing.assert_array_equal(problem.Q, problem.Q.T)


def test_sparse_density():
    problem, start = generate(GenSpec(n=40, m=10, density=0.2, q_rank=0, seed=2))
    A = problem.A.toarray() if sp.issparse(problem.A) else problem.A
    assert 0.05 < np.count_nonzero(A) / A.size < 0.4
    validate(problem)
    assert measure(problem, start)[0].feasible


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.data())
def test_generated_instances_validate(n, data):
    m = data.draw(st.integers(1, n))
    seed = data.draw(st.integers(0, 2**31))
    problem, start = generate(GenSpec(n=n, m=m, seed=seed))
    validate(problem)
    assert measure(problem, start)[0].feasible
    assert in_n2(start, 0.01) and in_ns(start, 0.99)


def test_ns_margin_hand_value():
    _, start = generate(GenSpec(n=2, m=1, seed=0))
    moved = perturb_within(start, NS(0.5), 0.5, seed=0)
    rep = proximity(moved)
    assert rep.min_ratio == pytest.approx(0.75, rel=1e-12)
    assert rep.max_ratio == pytest.approx(1.25, rel=1e-12)
    assert moved.mu == pytest.approx(start.mu, rel=1e-14)


def test_n2_margin_hand_value():
    _, start = generate(GenSpec(n=7, m=2, seed=0))
    moved = perturb_within(start, N2(0.1), 0.5, seed=3)
    rep = proximity(moved)
    assert rep.norm2_dev == pytest.approx(0.05 * start.mu, rel=1e-12)


@pytest.mark.parametrize("hood", [N2(0.1), NS(0.5)])
def test_full_margin_stays_inside(hood):
    _, start = generate(GenSpec(n=8, m=3, seed=1))
    for seed in range(20):
        assert hood.contains(perturb_within(start, hood, 1.0, seed=seed))


def test_margin_zero_is_identity():
    _, start = generate(GenSpec(n=4, m=2))
    assert perturb_within(start, N2(0.1), 0.0) is start


@pytest.mark.parametrize("margin", [-0.1, 1.5])
def test_margin_range(margin):
    _, start = generate(GenSpec(n=4, m=2))
    with pytest.raises(MarginOutOfRange):
        perturb_within(start, N2(0.1), margin)


def test_rebuild_cost_restores_feasibility():
    problem, start = generate(GenSpec(n=6, m=2, seed=5))
    moved = perturb_within(start, NS(0.5), 0.8, seed=1)
    assert not measure(problem, moved)[0].dual_ok
    assert measure(rebuild_cost(problem, moved), moved)[0].feasible


def test_spec_validation():
    with pytest.raises(ValueError):
        GenSpec(n=1, m=1)
    with pytest.raises(ValueError):
        GenSpec(n=4, m=5)
    with pytest.raises(ValueError):
        GenSpec(n=4, m=2, q_rank=5)
