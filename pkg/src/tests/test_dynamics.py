import numpy as np
import pytest
from pydantic import ValidationError

from program.dynamics import (
    BlowUpError,
    EvolutionTrace,
    NLSConfig,
    convergence_order,
    dispersive_decay_study,
    double_well_demo,
    evolve_linear,
    linear_trace,
    mass_drift,
    nls_solve,
    oscillation_period,
    resolvent_sandwich,
    well_masses,
)
from program.dynamics.linear import aliasing_warning
from program.potential import FREE, double_delta_spec, single_delta_spec
from program.settings.manager import settings_manager
from program.spectral import GridFunction, SpatialGrid, WavenumberGrid, build_decomposition, continuous_packet, pc_project
from program.waveops import apply_wplus, zero_energy_filter


@pytest.fixture
def x_grid():
    return SpatialGrid.symmetric(15.0, 0.05)


@pytest.fixture
def k_grid():
    return WavenumberGrid.midpoint(12.0, np.pi / 60.0)


@pytest.fixture
def repulsive(x_grid, k_grid):
    return build_decomposition(single_delta_spec(1.0), x_grid, k_grid)


@pytest.fixture
def well():
    return build_decomposition(double_delta_spec(1.0, 1.0), SpatialGrid.symmetric(10.0, 0.05), WavenumberGrid.midpoint(12.0, np.pi / 40.0))


def gaussian(grid, center=0.0, width=1.0):
    return GridFunction.sample(grid, lambda x: np.exp(-((x - center) ** 2) / (2 * width**2)))


def test_trace_validation(x_grid):
    f = gaussian(x_grid)
    with pytest.raises(ValueError, match="one state per time"):
        EvolutionTrace(np.array([0.0, 1.0]), [f])
    with pytest.raises(ValueError, match="strictly increasing"):
        EvolutionTrace(np.array([1.0, 1.0]), [f, f])


def test_well_masses_split_the_norm(x_grid):
    f = gaussian(x_grid)
    left, right = well_masses(f)
    assert left == pytest.approx(right)
    assert left + right == pytest.approx(float(np.sum(np.abs(f.values) ** 2) * f.spacing))


def test_linear_flow_conserves_mass(repulsive):
    f = continuous_packet(repulsive)
    assert evolve_linear(repulsive, f, 0.0).relative_distance(f) < 1e-4
    trace = linear_trace(repulsive, f, [0.0, 0.5, 1.0])
    masses = trace.diagnostics["mass"]
    assert np.max(np.abs(masses - masses[0])) < 1e-6
    assert trace.final.norm() == pytest.approx(1.0, abs=1e-4)


def test_group_law(repulsive):
    f = continuous_packet(repulsive)
    once = evolve_linear(repulsive, f, 0.6)
    twice = evolve_linear(repulsive, evolve_linear(repulsive, f, 0.3), 0.3)
    assert twice.relative_distance(once) < 1e-6


def test_free_dispersive_decay(x_grid, k_grid):
    decomp = build_decomposition(FREE, x_grid, k_grid)
    report = dispersive_decay_study(decomp, continuous_packet(decomp))
    assert report.passed, report.slope
    with pytest.raises(ValueError, match="two positive times"):
        dispersive_decay_study(decomp, continuous_packet(decomp), [1.0])


def test_resolvent_sandwich(x_grid, k_grid, repulsive):
    free = build_decomposition(FREE, x_grid, k_grid)
    f = gaussian(x_grid, 0.5)
    assert resolvent_sandwich(free, f).ratio == pytest.approx(1.0, abs=1e-8)
    image = apply_wplus(repulsive, zero_energy_filter(gaussian(x_grid, -0.5)))
    sandwich = resolvent_sandwich(repulsive, image)
    assert sandwich.route_discrepancy < settings_manager.settings.waveops.identity_tolerance
    assert np.isfinite(sandwich.ratio)


def test_nls_config():
    with pytest.raises(ValidationError):
        NLSConfig(sigma=0.0)
    cfg = NLSConfig(sign="focusing", convention="printed", coupling=2.0)
    assert cfg.strength == -2.0
    assert cfg.linear_sign == -1.0
    assert NLSConfig.from_settings(dt=0.5).dt == 0.5


def test_nls_conserves_mass():
    decomp = build_decomposition(single_delta_spec(0.5), SpatialGrid.symmetric(10.0, 0.05), WavenumberGrid.midpoint(12.0, np.pi / 40.0))
    u0 = gaussian(decomp.x_grid, 1.0)
    trace = nls_solve(decomp, u0, NLSConfig(coupling=1.0, dt=0.01, t_final=0.5))
    assert mass_drift(trace) < 1e-8
    assert trace.times[0] == 0.0
    assert trace.times[-1] == pytest.approx(0.5)


def test_strang_splitting_is_second_order():
    decomp = build_decomposition(single_delta_spec(0.5), SpatialGrid.symmetric(10.0, 0.05), WavenumberGrid.midpoint(12.0, np.pi / 40.0))
    report = convergence_order(decomp, gaussian(decomp.x_grid), NLSConfig(coupling=1.0, dt=0.02, t_final=0.5))
    assert 1.5 < report.order < 2.5


def test_focusing_blow_up_is_reported(mocker):
    mocker.patch.object(settings_manager.settings.nls, "blow_up_factor", 1.2)
    decomp = build_decomposition(single_delta_spec(0.5), SpatialGrid.symmetric(10.0, 0.05), WavenumberGrid.midpoint(12.0, np.pi / 40.0))
    cfg = NLSConfig(sign="focusing", coupling=20.0, dt=0.001, t_final=1.0)
    with pytest.raises(BlowUpError):
        nls_solve(decomp, gaussian(decomp.x_grid), cfg)


def test_oscillation_period():
    t = np.linspace(0.0, 10.0, 2001)
    assert oscillation_period(t, np.cos(2 * np.pi * t / 3.0)) == pytest.approx(3.0, rel=1e-3)
    assert np.isnan(oscillation_period(t[:50], np.cos(t[:50])))


def test_double_well_beat(well):
    demo = double_well_demo(1.0, 1.0, NLSConfig(coupling=0.0, dt=0.01), decomp=well)
    even, odd = demo.report.kappas
    assert abs(even - (1.0 + np.exp(-2 * even))) < 1e-8
    assert abs(odd - (1.0 - np.exp(-2 * odd))) < 1e-8
    assert demo.report.passed, demo.report.relative_error


def test_double_well_needs_two_states(repulsive):
    with pytest.raises(ValueError, match="even/odd pair"):
        double_well_demo(1.0, 1.0, decomp=repulsive)


def test_even_datum_keeps_the_wells_balanced(well):
    demo = double_well_demo(1.0, 1.0, NLSConfig(coupling=1.0, dt=0.02), recipe="symmetric", periods=1.0, decomp=well)
    assert demo.report.mode == "balance"
    assert demo.report.passed
    assert demo.report.imbalance < 1e-10
    assert np.isnan(demo.report.measured_period)


def test_round_off_swings_have_no_period():
    t = np.linspace(0.0, 10.0, 2001)
    noise = 1e-13 * np.cos(40.0 * t)
    assert np.isnan(oscillation_period(t, noise, floor=1e-8))
    assert oscillation_period(t, noise) == pytest.approx(2 * np.pi / 40.0, rel=1e-2)


def test_weak_nonlinearity_keeps_the_beat(well):
    demo = double_well_demo(1.0, 1.0, NLSConfig(coupling=0.05, dt=0.02), periods=10.0, decomp=well)
    report = demo.report
    assert report.mode == "beat"
    assert report.passed, report.relative_error
    t = demo.trace.diagnostics["t"]
    late = t > 9.0 * report.beat_period
    difference = (demo.trace.diagnostics["right_mass"] - demo.trace.diagnostics["left_mass"])[late]
    assert difference.max() > 0.8
    assert difference.min() < -0.8


def test_focusing_soliton_translates():
    decomp = build_decomposition(FREE, SpatialGrid.symmetric(15.0, 0.05), WavenumberGrid.midpoint(12.0, np.pi / 60.0))
    # e^{i x} sech(x + 2) solves i u_t = -u'' - 2|u|^2 u up to a phase and moves at speed 2
    u0 = GridFunction.sample(decomp.x_grid, lambda x: np.exp(1j * x) / np.cosh(x + 2.0))
    trace = nls_solve(decomp, u0, NLSConfig(sign="focusing", coupling=2.0, dt=0.005, t_final=1.0))
    assert mass_drift(trace) < 1e-8
    assert trace.diagnostics["mass"][0] == pytest.approx(2.0, abs=1e-6)
    x = decomp.x_grid.points
    assert np.max(np.abs(np.abs(trace.final.values) - 1.0 / np.cosh(x))) < 5e-3
    density = np.abs(trace.final.values) ** 2
    assert np.sum(x * density) / np.sum(density) == pytest.approx(0.0, abs=1e-2)


def test_bound_state_rotates_at_its_energy():
    decomp = build_decomposition(single_delta_spec(-1.0), SpatialGrid.symmetric(10.0, 0.05), WavenumberGrid.midpoint(12.0, np.pi / 40.0))
    kappa = float(decomp.kappas[0])
    assert kappa == pytest.approx(1.0, abs=1e-6)
    state = decomp.bound_states[0][1]
    trace = nls_solve(decomp, state, NLSConfig(coupling=0.0, dt=0.01, t_final=1.0))
    overlap = np.vdot(state.values, trace.final.values) / np.vdot(state.values, state.values)
    assert abs(overlap) == pytest.approx(1.0, abs=1e-4)
    assert np.angle(overlap) == pytest.approx(kappa**2, abs=1e-4)


def test_repulsive_delta_dispersive_decay(repulsive):
    report = dispersive_decay_study(repulsive, continuous_packet(repulsive))
    assert report.passed, report.slope


def test_projected_double_well_dispersive_decay(well):
    datum = continuous_packet(well) + 0.5 * well.bound_states[0][1]
    projected = pc_project(well, datum, check=False).function
    assert np.max(np.abs(well.bound_coefficients(projected))) < 1e-4
    report = dispersive_decay_study(well, projected)
    assert report.passed, report.slope


def test_aliasing_warning_follows_the_stationary_point():
    k_grid = WavenumberGrid.midpoint(12.0, np.pi / 60.0)
    spectrum = GridFunction.sample(k_grid, lambda k: np.exp(-4.0 * (k - 3.0) ** 2).astype(complex))
    assert aliasing_warning(spectrum, 0.5, 15.0) is None
    message = aliasing_warning(spectrum, 4.0, 15.0)
    assert message is not None and "stationary-phase" in message
