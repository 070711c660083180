import numpy as np
import pytest

from program.jost import (
    b1_k_grid,
    b1_kernel,
    dk_kernel,
    fixed_point_m1,
    kn_series,
    refinement_report,
    solve_jost,
    solve_m1,
    solve_m2,
    synthesize_m1,
    verify_kernel_bounds,
    verify_m_bounds,
)
from program.potential import FREE, DeltaTerm, PotentialSpec, RegularPart, double_delta_spec, single_delta_spec
from program.scattering import double_delta_closed_form, single_delta_closed_form, square_barrier_transmission

K = np.linspace(0.25, 8.0, 24)
X = np.linspace(-3.0, 3.0, 61)


@pytest.fixture
def box():
    return PotentialSpec(regular=RegularPart(kind="box", params={"height": 0.5, "left": -1.0, "right": 1.0}))


@pytest.fixture
def box_delta(box):
    return box.model_copy(update={"deltas": [DeltaTerm(c=1.0, y=0.0)]})


def test_free_jost_functions_are_plane_waves():
    jost = solve_jost(FREE, K, X)
    assert np.allclose(jost.m1, 1.0)
    assert np.allclose(jost.m2, 1.0)
    assert np.allclose(jost.T, 1.0)


def test_single_delta_coefficients():
    jost = solve_jost(single_delta_spec(0.8), K, X)
    T, R = single_delta_closed_form(0.8, K)
    assert np.max(np.abs(jost.T - T)) < 1e-8
    assert np.max(np.abs(jost.R1 - R)) < 1e-8
    assert np.max(np.abs(jost.R2 - R)) < 1e-8


def test_single_delta_m1_left_of_the_delta():
    c = 1.6
    jost = solve_m1(single_delta_spec(c / 2), K, X)
    left = X < 0
    b = c / (2j * K)
    expected = 1.0 + b[None, :] * (np.exp(-2j * np.outer(X[left], K)) - 1.0)
    assert np.max(np.abs(jost.m1[left] - expected)) < 1e-8
    assert np.allclose(jost.m1[X > 0], 1.0)


def test_single_delta_m2_right_of_the_delta():
    c = 1.6
    jost = solve_m2(single_delta_spec(c / 2), K, X)
    right = X > 0
    b = c / (2j * K)
    expected = 1.0 + b[None, :] * (np.exp(2j * np.outer(X[right], K)) - 1.0)
    assert np.max(np.abs(jost.m2[right] - expected)) < 1e-8
    assert np.allclose(jost.m2[X < 0], 1.0)


def test_dk_kernel():
    x = np.linspace(0.0, 2.0, 5)
    assert np.allclose(dk_kernel(0.0, x), x)
    assert np.allclose(dk_kernel(1.5, x), (np.exp(3j * x) - 1.0) / 3j)


def test_double_delta_transmission():
    jost = solve_jost(double_delta_spec(1.0, 1.0), K, X)
    T, _ = double_delta_closed_form(1.0, 1.0, K)
    assert np.max(np.abs(jost.T - T)) < 1e-8


def test_box_transmission_and_wronskian(box):
    jost = solve_jost(box, K, X)
    assert np.max(np.abs(jost.T - square_barrier_transmission(0.5, 2.0, K))) < 1e-4
    wronskian = jost.wronskian() * jost.T[None, :] / (-2j * K[None, :])
    assert np.max(np.abs(wronskian - 1.0)) < 1e-4


def test_fixed_point_matches_sweep(box):
    sweep = solve_m1(box, K[:6], X, check=False).m1
    picard, iterations = fixed_point_m1(box, K[:6], X)
    assert np.max(np.abs(sweep - picard)) < 1e-8
    assert iterations < 200


def test_zero_wavenumber_is_rejected():
    with pytest.raises(ValueError, match="k = 0"):
        solve_m1(single_delta_spec(1.0), np.array([0.0, 1.0]), X)


def test_b1_k_grid_is_midpoint():
    k = b1_k_grid(k_max=10.0, dk=0.5)
    assert k.size == 20
    assert k[0] == 0.25
    assert np.allclose(np.diff(k), 0.5)


def test_b1_of_single_delta_is_a_step():
    c = 1.0
    x = np.array([-1.0, -0.5, 0.5])
    b1 = b1_kernel(single_delta_spec(c / 2), x)
    y = b1.y_grid
    for row, xi in enumerate(x):
        expected = np.where(y < -xi, c, 0.0)
        away = (np.abs(y + xi) > 0.5) & (y > 0.0) & (y < 6.0)
        assert np.max(np.abs(b1.values[row, away] - expected[away])) < 2e-3, f"row x={xi}"
    assert np.allclose(b1.edge, [c, c, 0.0])


def test_b1_round_trip(box):
    x = np.linspace(-1.5, 1.5, 7)
    k = b1_k_grid(k_max=100.0)
    jost = solve_m1(box, k, x)
    b1 = b1_kernel(box, x, k_max=100.0)
    assert np.max(np.abs(synthesize_m1(b1, k) - jost.m1)) < 1e-3


def test_free_b1_vanishes():
    b1 = b1_kernel(FREE, np.linspace(-1.0, 1.0, 5), k_max=50.0)
    assert np.allclose(b1.values, 0.0)
    assert verify_kernel_bounds(FREE, b1).vacuous


def test_kn_series_single_delta():
    c = 1.0
    x = np.round(np.arange(-1.0, 1.0001, 0.1), 12)
    y = np.round(np.arange(0.0, 2.0001, 0.02), 12)
    series = kn_series(single_delta_spec(c / 2), x, y, h=0.02)
    assert np.max(np.abs(series.terms[1])) < 1e-12, "K_1 vanishes for one delta"
    s = x[:, None] + y[None, :]
    away = (np.abs(s) > 1e-9) & (y[None, :] > 0)
    expected = np.where(s < 0, c, 0.0)
    assert np.max(np.abs(series.total - expected)[away]) < 1e-12


def test_kn_series_off_lattice_delta():
    spec = PotentialSpec(deltas=[DeltaTerm(c=1.0, y=0.013)])
    with pytest.raises(ValueError, match="lattice"):
        kn_series(spec, np.array([-1.0, 0.0, 1.0]), np.array([0.0, 0.02]), h=0.02)


def test_kn_series_matches_b1_for_box(box):
    x = np.round(np.arange(-1.5, 1.5001, 0.1), 12)
    y = np.round(np.arange(0.0, 2.0001, 0.02), 12)
    series = kn_series(box, x, y, h=0.02)
    b1 = b1_kernel(box, x)
    interpolated = np.array([np.interp(y, b1.y_grid, row) for row in b1.values])
    s = x[:, None] + y[None, :]
    keep = (np.abs(s + 1.0) >= 0.02) & (np.abs(s - 1.0) >= 0.02) & (y[None, :] > 0)
    assert np.max(np.abs(interpolated - series.total)[keep]) < 1e-4


def test_kernel_bound_constants_refine(box_delta):
    x = np.linspace(-1.5, 1.5, 16)
    coarse = verify_kernel_bounds(box_delta, b1_kernel(box_delta, x))
    fine = verify_kernel_bounds(box_delta, b1_kernel(box_delta, x, k_max=800.0, quad_dx=5e-4))
    assert np.isfinite(coarse.constant) and np.isfinite(coarse.dx_constant)
    report = refinement_report(
        {"B1": coarse.constant, "dx_B1": coarse.dx_constant},
        {"B1": fine.constant, "dx_B1": fine.dx_constant},
    )
    assert report.passed, report.relative_change


def test_m_bounds_are_finite(box_delta):
    jost = solve_jost(box_delta, K, np.linspace(-4.0, 4.0, 81))
    report = verify_m_bounds(box_delta, jost)
    assert report.passed
    assert not report.vacuous
    assert report.a == 1.0


def test_refinement_report():
    assert refinement_report({"C": 1.0}, {"C": 1.05}, tolerance=0.1).passed
    moved = refinement_report({"C": 1.0}, {"C": 1.5}, tolerance=0.1)
    assert not moved.passed
    assert moved.relative_change["C"] == pytest.approx(1.0 / 3.0)
