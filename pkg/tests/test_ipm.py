import dataclasses
import math

import numpy as np
import pytest

from inexact_ipm import (
    N2,
    NS,
    GenSpec,
    InexactMode,
    InexactnessPolicy,
    InjectShape,
    Iterate,
    NewtonDirection,
    ParamsInfeasible,
    SolverConfig,
    StartOutsideNeighbourhood,
    Status,
    StepMode,
    Variant,
    generate,
    longstep_alpha_bounds,
    longstep_iteration,
    mu_after_step,
    perturb_within,
    rebuild_cost,
    run,
    shortstep_iteration,
)
from inexact_ipm.ipm import CSV_FIELDS

from .oracles import mp_alpha_margins, mu_direct


def test_mu_after_step_hand_value():
    it = Iterate([1.0, 1.0], [0.0], [1.0, 1.0])
    d = NewtonDirection(np.zeros(2), np.zeros(1), np.zeros(2), np.array([0.02, 0.02]), 0.1)
    # (1 - 0.5 * 0.5) * 1 + 0.5 * 0.04 / 2 = 0.76
    assert mu_after_step(it, d, 0.5, 0.5) == pytest.approx(0.76, abs=1e-15)


def test_mu_after_step_matches_direct_evaluation(small_qp):
    problem, it = small_qp
    cfg = SolverConfig(inexact=InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ADVERSARIAL_SIGN))
    new, rec = shortstep_iteration(problem, it, cfg, rng=np.random.default_rng(0), k=1)
    assert rec.mu == pytest.approx(new.mu, rel=1e-12)
    assert rec.mu_predicted == pytest.approx(rec.mu, rel=1e-9)


def test_alpha_bounds_hand_values():
    a1, a2, a3, amax = longstep_alpha_bounds(2, 0.5, 0.5, 0.05)
    C = 1.05**2 / 0.5 * 1.5**2
    assert C == pytest.approx(4.96125, abs=1e-12)
    assert a1 == pytest.approx((0.25 - 0.05 * 1.5 * 1.5) / (2.5 * C), rel=1e-14)
    assert a2 == pytest.approx((0.5 - 0.05 * 3.0 * 1.5) / C, rel=1e-14)
    assert a3 == pytest.approx((0.4 - 0.05 * 1.5) / C, rel=1e-14)
    # six-digit printed values (the last is truncated rather than rounded)
    for got, printed in zip((a1, a2, a3), (0.011086, 0.055430, 0.065507)):
        assert got == pytest.approx(printed, abs=1e-6)
    assert amax == a1
    margins = mp_alpha_margins(2, 0.5, 0.5, 0.05)
    for ai, mi in zip((a1, a2, a3), margins):
        assert ai - 1 / 100 == pytest.approx(float(mi), rel=1e-12)


def test_alpha_bounds_infeasible():
    with pytest.raises(ParamsInfeasible):
        longstep_alpha_bounds(2, 0.5, 0.5, 0.9)


def test_config_defaults():
    assert SolverConfig().delta == 0.3
    assert SolverConfig(variant=Variant.LONG).delta == 0.05
    assert SolverConfig().eta == pytest.approx(0.002, abs=1e-15)


def test_config_rejects_uncertified_delta_under_audit():
    with pytest.raises(ParamsInfeasible):
        SolverConfig(delta=0.5, audit=True)
    # without the audit the run is allowed, only the guarantee is lost
    assert SolverConfig(delta=0.5).eta < 0


def test_config_delta_overrides_policy():
    cfg = SolverConfig(delta=0.2, inexact=InexactnessPolicy(InexactMode.INJECT, delta=0.7))
    assert cfg.policy.delta == 0.2


def test_tiny_lp_exact_short_step(tiny_lp):
    problem, it = tiny_lp
    new, rec = shortstep_iteration(problem, it, SolverConfig(audit=True), k=1)
    sigma = 1 - 0.1 / math.sqrt(2)
    assert rec.sigma == pytest.approx(sigma, rel=1e-15)
    assert new.mu == pytest.approx(sigma, rel=1e-14)
    np.testing.assert_allclose(new.x, [1.0, 1.0], atol=1e-15)
    assert rec.dxds == 0.0


@pytest.mark.parametrize(
    "policy",
    [
        InexactnessPolicy(),
        InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.RANDOM_SPHERE, seed=2),
        InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ADVERSARIAL_SIGN),
        InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ALIGNED_WITH_XI),
        InexactnessPolicy(InexactMode.ITERATIVE),
    ],
    ids=["exact", "sphere", "adversarial", "aligned", "iterative"],
)
def test_shortstep_run_audited(small_qp, policy):
    problem, start = small_qp
    cfg = SolverConfig(epsilon=1e-4, inexact=policy, audit=True)
    result = run(problem, start, cfg)
    assert result.status is Status.CONVERGED, result.message
    assert result.final.mu <= 1e-4
    for rec in result.trace:
        assert rec.prox2 <= 0.1 + 1e-12
        assert rec.mu <= (1 - cfg.eta / math.sqrt(problem.n)) * rec.mu_prev + 1e-12
        assert rec.primal_res <= 1e-8 and rec.dual_res <= 1e-8
        assert rec.lemma_ratio <= 1.0
        assert rec.r_ratio <= 0.3 + 1e-12


def test_shortstep_from_perturbed_start():
    problem, start = generate(GenSpec(n=10, m=4, seed=3))
    moved = perturb_within(start, N2(0.1), 0.95, seed=1)
    problem = rebuild_cost(problem, moved)
    cfg = SolverConfig(
        epsilon=1e-3,
        audit=True,
        inexact=InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ADVERSARIAL_SIGN),
    )
    result = run(problem, moved, cfg)
    assert result.status is Status.CONVERGED, result.message


@pytest.mark.parametrize("mode", [StepMode.THEORY, StepMode.PRACTICAL])
def test_longstep_run_audited(mode):
    problem, start = generate(GenSpec(n=4, m=2, seed=8))
    moved = perturb_within(start, NS(0.5), 0.9, seed=2)
    problem = rebuild_cost(problem, moved)
    cfg = SolverConfig(
        variant=Variant.LONG,
        epsilon=0.1,
        step_mode=mode,
        audit=True,
        inexact=InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ADVERSARIAL_SIGN),
    )
    result = run(problem, moved, cfg)
    assert result.status is Status.CONVERGED, result.message
    for rec in result.trace:
        assert rec.min_ratio >= 0.5 - 1e-12 and rec.max_ratio <= 2.0 + 1e-12
        assert rec.mu <= (1 - 0.1 * rec.alpha) * rec.mu_prev + 1e-12
    if mode is StepMode.THEORY:
        assert all(rec.alpha == pytest.approx(1 / 200) for rec in result.trace)
    else:
        assert result.iterations < 50


def test_longstep_single_iteration_infinity_norm():
    problem, start = generate(GenSpec(n=3, m=1, seed=4))
    cfg = SolverConfig(
        variant=Variant.LONG,
        audit=True,
        inexact=InexactnessPolicy(InexactMode.INJECT, inject_shape=InjectShape.ADVERSARIAL_SIGN),
    )
    new, rec = longstep_iteration(problem, start, cfg, k=1)
    assert rec.sigma == 0.5
    assert rec.r_ratio == pytest.approx(0.05, rel=1e-12)
    assert mu_direct(start, _replay_direction(start, new, rec.alpha), rec.alpha) == pytest.approx(new.mu, rel=1e-12)


def _replay_direction(it, new, alpha):
    return NewtonDirection((new.x - it.x) / alpha, (new.y - it.y) / alpha, (new.s - it.s) / alpha, np.zeros(it.n), 0.0)


def test_start_outside_neighbourhood():
    problem, start = generate(GenSpec(n=4, m=2, seed=0))
    bad = Iterate(start.x, start.y, start.s * np.array([0.5, 1.5, 1.0, 1.0]))
    problem = rebuild_cost(problem, bad)
    with pytest.raises(StartOutsideNeighbourhood):
        run(problem, bad, SolverConfig())


def test_infeasible_start_rejected():
    problem, start = generate(GenSpec(n=4, m=2, seed=0))
    with pytest.raises(StartOutsideNeighbourhood):
        run(problem, Iterate(start.x * 1.01, start.y, start.s / 1.01), SolverConfig())


def test_iteration_limit_status(small_qp):
    problem, start = small_qp
    result = run(problem, start, SolverConfig(max_iters=3))
    assert result.status is Status.ITERATION_LIMIT
    assert result.iterations == 3 and len(result.trace) == 3


def test_audit_violation_is_reported(small_qp, monkeypatch):
    import inexact_ipm.ipm as ipm

    problem, start = small_qp
    monkeypatch.setattr(ipm.bounds, "shortstep_second_order_bound", lambda *a: -1.0)
    result = run(problem, start, SolverConfig(audit=True, max_iters=5))
    assert result.status is Status.AUDIT_VIOLATION
    assert "iteration 1" in result.message


def test_breakdown_is_reported(small_qp):
    problem, start = small_qp
    cfg = SolverConfig(delta=1e-300, inexact=InexactnessPolicy(InexactMode.ITERATIVE), max_iters=5)
    result = run(problem, start, cfg)
    assert result.status is Status.NUMERICAL_BREAKDOWN
    assert "MaxInnerIterations" in result.message


def test_deterministic_rerun(small_qp):
    problem, start = small_qp
    cfg = SolverConfig(epsilon=1e-2, inexact=InexactnessPolicy(InexactMode.INJECT, seed=9))
    a, b = run(problem, start, cfg), run(problem, start, cfg)
    assert a.trace == b.trace


def test_trace_fields_present(small_qp):
    problem, start = small_qp
    rec = run(problem, start, SolverConfig(max_iters=1)).trace[0]
    assert rec.iter == 1
    for f in CSV_FIELDS:
        assert isinstance(getattr(rec, f), (int, float))


def test_config_is_frozen():
    cfg = SolverConfig()
    with pytest.raises(dataclasses.FrozenInstanceError):
        cfg.delta = 0.1

