"""Chebyshev polynomials, gain constants, and the reference table."""

import numpy as np
import pytest

from aafp import bound_c, bound_eps, bound_table, bound_table_text, chebyshev_t
from aafp.bounds import sufficient_condition
from aafp.problems import SeededRng


def test_chebyshev_small_orders():
    assert chebyshev_t(0, 0.7) == 1.0
    assert chebyshev_t(1, 0.7) == 0.7
    # T_2(x) = 2x^2 - 1 outside [-1, 1] as well
    assert chebyshev_t(2, -1.1) == pytest.approx(2 * 1.1**2 - 1, rel=1e-14)
    # T_4(3) = 8*81 - 8*9 + 1 = 577
    assert chebyshev_t(4, 3.0) == pytest.approx(577.0, rel=1e-13)


def test_chebyshev_recurrence_everywhere():
    rng = SeededRng(29)
    xs = np.concatenate([2.0 * rng.uniform(20) - 1.0, 1.0 + 4.0 * rng.uniform(10), -1.0 - 4.0 * rng.uniform(10)])
    for x in xs:
        t_prev, t_cur = 1.0, x
        for m in range(2, 12):
            t_next = 2.0 * x * t_cur - t_prev
            assert chebyshev_t(m, float(x)) == pytest.approx(t_next, rel=1e-9, abs=1e-12)
            t_prev, t_cur = t_cur, t_next


def test_chebyshev_cos_identity_inside():
    # T_m(cos u) = cos(m u)
    for m in range(8):
        for u in (0.1, 0.9, 2.0):
            assert chebyshev_t(m, np.cos(u)) == pytest.approx(np.cos(m * u), abs=1e-12)


def test_bound_c_decreases_with_window():
    values = [bound_c(0.3, 0.9, m) for m in range(1, 21)]
    for small, large in zip(values, values[1:]):
        assert large < small
    assert all(v > 0 for v in values)


def test_bound_eps_dominates_bound_c():
    # the closed-form estimate is an upper bound for the exact constant
    intervals = [(0.3, 0.9), (1.5, 3.0), (2.0, 5.0), (10.0, 30.0), (20.0, 50.0)]
    for a, b in intervals:
        for m in (2, 4, 10, 15):
            assert bound_eps(a, b, m) >= bound_c(a, b, m) * (1 - 1e-12)


def test_interval_validation():
    with pytest.raises(ValueError):
        bound_c(0.9, 0.3, 2)
    with pytest.raises(ValueError):
        bound_c(0.5, 1.5, 2)  # straddles 1
    with pytest.raises(ValueError):
        bound_eps(-0.1, 0.5, 2)
    with pytest.raises(ValueError):
        sufficient_condition(1.0, 2.0, 3, 3)  # requires 1 < a


def test_sufficient_condition_reference_points():
    a, b, m, t = 1.5, 3.0, 10, 10
    value, holds = sufficient_condition(a, b, m, t)
    root = np.sqrt(a * (1.0 - b) / (b * (1.0 - a)))
    expected = 2.0 * ((root - 1.0) / (root + 1.0)) ** m * b ** (t + 1)
    assert value == pytest.approx(expected, rel=1e-13)
    assert value == pytest.approx(0.0078, abs=5e-4)
    assert holds

    value2, holds2 = sufficient_condition(2.0, 5.0, 4, 4)
    assert not holds2
    assert value2 > 1.0

    # kappa enters linearly
    v1, _ = sufficient_condition(1.5, 3.0, 10, 10, kappa=1.0)
    v3, _ = sufficient_condition(1.5, 3.0, 10, 10, kappa=3.0)
    assert v3 == pytest.approx(3.0 * v1, rel=1e-13)


def test_table_reference_cells():
    rows = bound_table()
    flat = {((cell.interval), cell.m): cell for row in rows for cell in row}
    assert flat[((0.3, 0.9), 2)].formatted() == "0.5134(0.6005)"
    assert flat[((0.3, 0.9), 4)].formatted() == "0.1947(0.2003)"
    assert flat[((1.5, 3), 4)].formatted() == "0.4211(0.4211)"
    assert flat[((10, 30), 10)].formatted() == "0.1172(0.1172)"
    assert flat[((20, 50), 15)].formatted() == "0.0001(0.0001)"
    # scaled constant above one renders as a dash
    assert flat[((1.5, 3), 2)].formatted() == "-"
    assert flat[((2, 5), 2)].formatted() == "-"
    assert flat[((2, 5), 4)].formatted() == "-"


def test_table_text_layout():
    text = bound_table_text()
    lines = text.strip().splitlines()
    assert len(lines) == 6  # header plus one line per interval
    assert "m=2" in lines[0] and "m=15" in lines[0]
    assert "0.5134(0.6005)" in lines[1]
