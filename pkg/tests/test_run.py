import math

import numpy as np
import pytest

from axisym_euler import lemma
from axisym_euler.ode import AxisState, IntegratorConfig, PressureForcing, integrate
from axisym_euler.sim import (Grid2D, PressureField, extract_axis, init_field, ode_consistency_report, simulate,
                              track_axis_particle)
from axisym_euler.sim.profiles import gaussian_stream, gaussian_swirl, tapered_rigid_swirl
from axisym_euler.sim.run import PeriodicHistory, advect_axis_particle

HORIZON = 0.5


def standard_run(n: int):
    fld = init_field(Grid2D(n, n), psi0=gaussian_stream(0.5), v_theta0=gaussian_swirl(1.0, modulation=0.5))
    return simulate(fld, HORIZON, dt=0.02 * 64 / n)


@pytest.fixture(scope="module")
def runs():
    return {n: standard_run(n) for n in (32, 64, 128)}


# -- particles ------------------------------------------------------------------------


def _history(values_fn, times, z):
    return np.array([values_fn(t, z) for t in times])


def test_particle_at_rest():
    z = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    t = np.linspace(0, 1, 11)
    path = advect_axis_particle(1.2, t, z, 2 * np.pi, np.zeros((11, 32)))
    assert np.all(path == 1.2)


def test_particle_uniform_translation_wraps():
    z = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    t = np.linspace(0, 3, 31)
    path = advect_axis_particle(5.0, t, z, 2 * np.pi, np.full((31, 32), 0.7))
    np.testing.assert_allclose(path, np.mod(5.0 + 0.7 * t, 2 * np.pi), atol=1e-12)


@pytest.mark.parametrize("a", [0.4, 1.3, 2.9])
def test_particle_in_sine_flow(a):
    z = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    t = np.linspace(0, 1, 201)
    path = advect_axis_particle(a, t, z, 2 * np.pi, _history(lambda s, x: np.sin(x), t, z), substeps=4)
    exact = 2 * np.arctan(np.tan(a / 2) * np.exp(t))
    assert np.max(np.abs(path - exact)) <= 1e-6


def test_periodic_history_interpolates_linearly_in_time():
    z = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    t = np.array([0.0, 1.0])
    h = PeriodicHistory(t, z, 2 * np.pi, np.stack([np.cos(z), 3 * np.cos(z)]))
    assert h(0.5, 0.3) == pytest.approx(2 * math.cos(0.3), abs=1e-6)
    assert h(0.5, 0.3 + 2 * math.pi) == pytest.approx(h(0.5, 0.3))


# -- simulation output -----------------------------------------------------------------


def test_run_records_every_output(runs):
    r = runs[64]
    assert r.times[0] == 0.0 and r.times[-1] == pytest.approx(HORIZON)
    assert r.lam.shape == (len(r.times), 64)
    assert np.max(r.max_divergence) <= 1e-12
    assert np.max(r.max_parity) <= 1e-12


def test_energy_drift_standard_scenario(runs):
    assert runs[128].energy_drift() <= 1e-3


def test_simulation_is_deterministic():
    a, b = standard_run(32), standard_run(32)
    assert np.array_equal(a.lam, b.lam) and np.array_equal(a.q_rr, b.q_rr)


def test_record_every_thins_output():
    fld = init_field(Grid2D(32, 32), psi0=gaussian_stream(0.5))
    r = simulate(fld, 0.2, dt=0.02, record_every=3)
    np.testing.assert_allclose(r.times, [0.0, 0.06, 0.12, 0.18, 0.2])


def test_stationary_swirl_consistency_is_trivial():
    fld = init_field(Grid2D(64, 32), v_theta0=tapered_rigid_swirl(1.3, 2.0))
    run = simulate(fld, 0.2, dt=0.02)
    rep = ode_consistency_report(run, 1.0)
    assert rep.max["axis_vorticity"] <= 1e-10
    np.testing.assert_array_equal(rep.x3, 1.0)
    # d lambda/dt = 0 while the transverse balance -omega^2/2 + 2 q_rr vanishes only up to O(dr^2)
    assert rep.max["transverse_strain"] <= 1e-3


@pytest.mark.parametrize("a", [1.0, 2.5])
def test_consistency_residuals_converge(runs, a):
    coarse, fine = ode_consistency_report(runs[64], a), ode_consistency_report(runs[128], a)
    for key in ("transverse_strain", "axial_strain", "axis_vorticity"):
        assert coarse.max[key] / fine.max[key] >= 1.8
    assert 3.2 <= coarse.max["trace"] / fine.max["trace"] <= 4.8
    assert fine.split_mismatch <= 1e-12


@pytest.mark.parametrize("a", [1.0, 2.5])
def test_ode_driven_by_measured_pressure_tracks_pde(runs, a):
    """The axis ODE forced with the PDE's own q_rr reproduces its lambda and omega_bar."""
    gaps = []
    for n in (64, 128):
        tr = track_axis_particle(runs[n], a)
        forcing = PressureForcing.tabulated(tr.t, tr.q_rr)
        rec = integrate(AxisState(tr.lam[0], tr.omega_bar[0]), forcing, HORIZON, IntegratorConfig(max_step=0.005))
        lam = np.interp(tr.t, rec.t, rec.lam)
        om = np.interp(tr.t, rec.t, rec.omega_bar)
        gaps.append(max(np.max(np.abs(lam - tr.lam)), np.max(np.abs(om - tr.omega_bar))))
    assert gaps[1] <= 5e-3
    assert gaps[0] / gaps[1] >= 3.2


# -- agreement with the independent identity checker -----------------------------------


def test_extract_axis_agrees_with_cartesian_checker():
    sf = lemma.gaussian_field(amp=0.5, swirl=1.0)
    errs = []
    for n in (64, 128):
        g = Grid2D(n, n)
        fld = init_field(g, psi0=gaussian_stream(0.5), v_theta0=gaussian_swirl(1.0, modulation=0.5))
        R, Z = g.mesh()
        p = np.vectorize(sf.p)(R, Z)
        d = extract_axis(fld, PressureField(g, p, np.zeros(g.shape), np.zeros(g.nz)))
        ref = np.array([lemma.axis_quantities(sf, float(z)) for z in g.z])
        errs.append(max(np.max(np.abs(d.lam - ref[:, 0])), np.max(np.abs(d.omega_bar - ref[:, 1])),
                        np.max(np.abs(d.q_rr - ref[:, 2]))))
    # grid stencil error is O(dr^2 + dz^2); the checker's O(h^2) with h = 1e-3 is negligible
    assert errs[0] <= 0.05 and errs[0] / errs[1] >= 3.2
