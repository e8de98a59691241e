"""Periodic schedules mixing plain and accelerated steps."""

import numpy as np
import pytest

from aafp import (
    UNBOUNDED,
    CsrMatrix,
    ScheduleConfig,
    StopRule,
    aa_solve,
    aafp_solve,
    fp_solve,
    norm2,
    richardson_map,
    step_kind,
)
from aafp.problems import SeededRng, build_permutation_system


def test_step_kind_schedules():
    # iteration 1 is always the plain start; afterwards each period of
    # s + t steps runs t plain then s accelerated
    assert [step_kind(k, 1, 3) for k in range(2, 10)] == [
        "FP",
        "FP",
        "AA",
        "FP",
        "FP",
        "FP",
        "AA",
        "FP",
    ]
    assert [step_kind(k, 1, 2) for k in range(2, 8)] == ["FP", "AA", "FP", "FP", "AA", "FP"]
    assert [step_kind(k, 1, 1) for k in range(2, 6)] == ["AA", "FP", "AA", "FP"]
    assert all(step_kind(k, 2, 0) == "AA" for k in range(2, 8))


def test_schedule_config_validation():
    with pytest.raises(ValueError):
        ScheduleConfig(m=-1)
    with pytest.raises(ValueError):
        ScheduleConfig(m=2, s=0)
    with pytest.raises(ValueError):
        ScheduleConfig(m=2, t=-1)
    with pytest.raises(ValueError):
        ScheduleConfig(m=2, rank_tol=-1.0)
    ScheduleConfig(m=UNBOUNDED, s=3, t=2)  # valid


def test_trace_labels_follow_schedule():
    a = CsrMatrix.from_dense(np.diag([0.5, 0.8, 0.9]))
    q = richardson_map(a, np.ones(3))
    cfg = ScheduleConfig(m=2, s=1, t=2)
    _, trace = aafp_solve(q, np.zeros(3), cfg, StopRule(rel_tol=1e-10, max_iters=40))
    expected = [step_kind(k, 1, 2) for k in range(1, trace.iterations + 1)]
    assert trace.step_kinds == expected
    assert trace.step_kinds[0] == "FP"


def test_zero_plain_steps_is_plain_acceleration():
    a = CsrMatrix.from_dense(np.diag([0.3, 0.6, 0.85, 0.95]))
    q = richardson_map(a, np.ones(4))
    stop = StopRule(rel_tol=1e-11, max_iters=100)
    _, with_schedule = aafp_solve(q, np.zeros(4), ScheduleConfig(m=3, s=1, t=0), stop)
    _, plain_aa = aa_solve(q, np.zeros(4), 3, stop)
    assert with_schedule.residual_norms == plain_aa.residual_norms
    assert with_schedule.step_kinds == plain_aa.step_kinds


def test_zero_window_is_plain_iteration_for_any_schedule():
    a = CsrMatrix.from_dense(np.diag([0.5, 0.7]))
    q = richardson_map(a, np.ones(2))
    stop = StopRule(rel_tol=1e-10, max_iters=100)
    _, plain = fp_solve(q, np.zeros(2), stop)
    for s, t in ((1, 0), (2, 1), (1, 3)):
        _, scheduled = aafp_solve(q, np.zeros(2), ScheduleConfig(m=0, s=s, t=t), stop)
        assert scheduled.residual_norms == plain.residual_norms
        # acceleration steps over an empty window are labeled plain
        assert all(kind == "FP" for kind in scheduled.step_kinds)


def test_permutation_system_convergence_count():
    # orthogonal cyclic shift: plain iteration cannot converge, but the
    # scheduled solver with an unbounded window finishes shortly after
    # the window spans the Krylov space
    a, b = build_permutation_system(26)
    q = richardson_map(a, b)
    cfg = ScheduleConfig(m=UNBOUNDED, s=1, t=3)
    x, trace = aafp_solve(q, np.ones(26), cfg, StopRule(rel_tol=1e-8, max_iters=200))
    assert trace.converged
    assert trace.iterations == 28
    exact = np.zeros(26)
    exact[-1] = 1.0
    assert norm2(x - exact) < 1e-7


def test_contractive_map_never_degrades_per_step():
    # for ||M|| = c < 1 every step, plain or accelerated, contracts the
    # residual by at least c up to roundoff
    rng = SeededRng(11)
    for trial in range(25):
        n = 4 + trial % 6
        c = 0.1 + 0.85 * float(rng.uniform(1)[0])
        signs = np.where(rng.uniform(n) < 0.5, -1.0, 1.0)
        diag = signs * (c * (0.2 + 0.8 * rng.uniform(n)))
        idx = int(rng.uniform(1)[0] * n) % n
        diag[idx] = c * signs[idx]  # pin the norm at c
        a = CsrMatrix.from_dense(np.eye(n) - np.diag(diag))
        q = richardson_map(a, rng.normal(n))
        m = trial % 4
        s = 1 + trial % 3
        t = trial % 4
        _, trace = aafp_solve(
            q, rng.normal(n), ScheduleConfig(m=m, s=s, t=t), StopRule(rel_tol=1e-10, max_iters=60)
        )
        norms = trace.residual_norms
        for i in range(trace.iterations):
            assert norms[i + 1] <= c * norms[i] + 1e-12


def test_windowed_never_exceeds_window():
    # depth seen by any acceleration step is min(k - 1, m)
    a = CsrMatrix.from_dense(np.diag([0.9, 0.8, 0.7, 0.6, 0.5]))
    q = richardson_map(a, np.ones(5))
    cfg = ScheduleConfig(m=UNBOUNDED, s=1, t=0, unbounded_cap=1000)
    _, trace = aafp_solve(q, np.zeros(5), cfg, StopRule(rel_tol=1e-12, max_iters=50))
    assert trace.converged
    # unbounded window on a 5-D linear map: exact in at most 6 iterations
    assert trace.iterations <= 6
