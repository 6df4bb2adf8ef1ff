import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import random_exppoly
from walker3 import expr as E
from walker3.geodesics import (
    BLOWUP_COLUMNS,
    CSV_COLUMNS,
    GeodesicState,
    blowup_experiment_pc,
    christoffel_from_partials,
    energy,
    geodesic_rhs,
    inner,
    integrate_geodesic,
    nb_closed_form,
    nb_closed_form_velocity,
    nb_constants,
    nb_metric,
    parallel_transport,
    pc_phi,
)
from walker3.jets import grad_eval
from walker3.metric import christoffel

seeds = st.integers(0, 2**32 - 1)
small = st.floats(-0.5, 0.5)


@given(seeds, small, small)
def test_christoffels_from_partials_match_levi_civita(seed, x, y):
    f = random_exppoly(np.random.default_rng(seed)).expr()
    _, fx, fy = grad_eval(f, x, y)
    np.testing.assert_allclose(christoffel_from_partials(fx, fy), christoffel(f, (x, y)), atol=1e-12)


def test_rhs_frozen():
    # f = x y^2 at (1, 2): f_x = 4, f_y = 4
    out = geodesic_rhs(E.parse("x*y^2"), GeodesicState(0.0, (1.0, 2.0, 0.0), (1.0, 0.5, 0.0)))
    assert out.vel == pytest.approx((0.0, -4.0, 4.0 + 2 * 4.0 * 0.5))


@given(seeds, small, small, small)
def test_energy_is_conserved(seed, y0, v0, w0):
    f = random_exppoly(np.random.default_rng(seed), max_deg=2).expr()
    traj = integrate_geodesic(f, GeodesicState(0.0, (0.0, y0, 0.0), (0.5, v0, w0)), 1.0, 1e-11)
    if traj.termination == "ReachedTmax":
        assert traj.energy_drift < 1e-8 * max(1.0, abs(traj.energies[0]))


@pytest.mark.parametrize("b,alpha,y0,v0", [(1.0, 1.0, -1.0, -0.5), (0.5, 2.0, 0.3, 0.2), (-1.5, 0.7, 0.0, 1.0)])
def test_nb_matches_sech2_closed_form(b, alpha, y0, v0):
    ts = np.linspace(0, 10, 101)
    traj = integrate_geodesic(nb_metric(b), GeodesicState(0.0, (0.0, y0, 0.0), (alpha, v0, 0.0)), 10.0, 1e-12, t_eval=ts)
    C1, C2 = nb_constants(b, alpha, y0, v0)
    y = nb_closed_form(b, alpha, C1, C2, ts)
    np.testing.assert_allclose(traj.states[:, 1], y, rtol=1e-8, atol=1e-12)
    np.testing.assert_allclose(traj.states[:, 4], nb_closed_form_velocity(b, C1, C2, ts), atol=1e-8)


def test_nb_long_time_completeness():
    traj = integrate_geodesic(nb_metric(1.0), GeodesicState(0.0, (0.0, -1.0, 0.0), (1.0, -0.5, 0.0)), 1e3)
    assert traj.termination == "ReachedTmax"
    assert traj.t[-1] == 1e3


@given(seeds, small, small)
def test_parallel_transport_preserves_inner_products(seed, v0, w0):
    f = random_exppoly(np.random.default_rng(seed), max_deg=2).expr()
    traj = integrate_geodesic(f, GeodesicState(0.0, (0.1, 0.2, 0.0), (0.4, v0, w0)), 1.0, 1e-11)
    tr = parallel_transport(f, traj, (0.3, 1.0, -0.2), 1e-11)
    if tr.termination == "ReachedTmax":
        assert np.ptp(tr.norms) < 1e-8
        assert np.ptp(tr.pairings) < 1e-8
        np.testing.assert_allclose(tr.Y[:, 0], 0.3)


def test_inner_and_energy():
    f = E.parse("x + y")
    assert inner(f, (1.0, 1.0, 0.0), (1, 0, 0), (1, 0, 0)) == -4.0
    assert energy(f, (1.0, 1.0, 0.0), (1.0, 2.0, 3.0)) == -4.0 + 6.0 + 4.0


def test_pc_phi_initial_data():
    assert pc_phi(0.0) == pytest.approx(1.0)
    h = 1e-6
    assert (pc_phi(h) - pc_phi(-h)) / (2 * h) == pytest.approx(0.0, abs=1e-8)


@pytest.fixture(scope="module")
def blowup():
    return blowup_experiment_pc()


def test_blowup_terminates_near_one(blowup):
    assert blowup.termination in ("StepUnderflow", "NonFinite")
    assert 1.0 - blowup.t_star < 1e-3
    assert blowup.curvature_at_t_star > 1e6


def test_blowup_table(blowup):
    T = blowup.table
    assert T.shape[1] == len(BLOWUP_COLUMNS)
    np.testing.assert_allclose(T[:, 8], T[:, 9], rtol=1e-6)
    np.testing.assert_allclose(T[:, 7], 1.0, atol=1e-8)
    np.testing.assert_allclose(T[:, 2], T[:, 12], atol=1e-9)
    header, first = blowup.to_csv().splitlines()[:2]
    assert header.split(",") == list(BLOWUP_COLUMNS)
    assert first.split(",")[:3] == ["0", "0", "1"]


def test_trajectory_csv():
    traj = integrate_geodesic(E.parse("y^2"), GeodesicState(0.0, (0, 1, 0), (1, 0, 0)), 1.0, t_eval=[0.0, 0.5, 1.0])
    lines = traj.to_csv().splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert len(lines) == 4
    assert float(lines[2].split(",")[2]) == pytest.approx(np.cos(np.sqrt(2) * 0.5), rel=1e-9)
