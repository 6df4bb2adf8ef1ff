import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from walker3.errors import DomainError, ODESolveError
from walker3.integrate import solve, solve_at


def osc(t, y):
    return np.array([y[1], -y[0]])


def test_harmonic_oscillator_lands_on_requested_times():
    ts = np.linspace(0, 20, 41)
    sol = solve(osc, 0.0, [1.0, 0.0], 20.0, t_eval=ts)
    assert sol.success and sol.status == "ReachedTmax"
    np.testing.assert_array_equal(sol.t, ts)
    np.testing.assert_allclose(sol.y[:, 0], np.cos(ts), atol=1e-9)


def test_agrees_with_scipy_dop853():
    rhs = lambda t, y: np.array([y[1], -math.sin(y[0]) - 0.1 * y[1]])
    ours = solve(rhs, 0.0, [2.0, 0.0], 15.0, rtol=1e-11, atol=1e-13)
    ref = solve_ivp(rhs, (0, 15), [2.0, 0.0], method="DOP853", rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(ours.y[-1], ref.y[:, -1], atol=1e-8)


def test_blowup_ends_in_step_underflow():
    sol = solve(lambda t, y: np.array([y[0] ** 2]), 0.0, [1.0], 2.0)
    assert sol.status in ("StepUnderflow", "NonFinite")
    assert sol.t[-1] == pytest.approx(1.0, abs=1e-5)


def test_domain_error_shrinks_then_stops():
    def rhs(t, y):
        if t > 0.5:
            raise DomainError("outside")
        return np.array([1.0])

    sol = solve(rhs, 0.0, [0.0], 1.0)
    assert sol.status == "LeftDomain"
    assert sol.t[-1] == pytest.approx(0.5, abs=1e-6)


def test_max_steps():
    sol = solve(osc, 0.0, [1.0, 0.0], 1e3, max_steps=5)
    assert sol.status == "MaxSteps" and not sol.success


def test_solve_at_both_directions():
    out = solve_at(osc, 0.0, [1.0, 0.0], [-1.0, 0.0, 2.0])
    assert out[-1.0][0] == pytest.approx(math.cos(1.0), abs=1e-11)
    assert out[2.0][1] == pytest.approx(-math.sin(2.0), abs=1e-11)
    with pytest.raises(ODESolveError):
        solve_at(lambda t, y: np.array([y[0] ** 2]), 0.0, [1.0], [3.0])
