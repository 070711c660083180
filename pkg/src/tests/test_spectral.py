import numpy as np
import pytest

from program.potential import FREE, double_delta_spec, single_delta_spec
from program.spectral import (
    DiscrepancyError,
    GridFunction,
    SpatialGrid,
    WavenumberGrid,
    build_decomposition,
    continuous_packet,
    distorted_ft,
    distorted_ft_adjoint,
    fourier_transform,
    inverse_fourier_transform,
    lippmann_schwinger_residual,
    pc_project,
    pc_route_agreement,
    pc_two_wave,
    psi_plus,
    source_agreement,
    spectral_coverage,
    unitary_ft,
)
from program.spectral.grids import jump_stencil


@pytest.fixture
def x_grid():
    return SpatialGrid.symmetric(15.0, 0.05)


@pytest.fixture
def k_grid():
    return WavenumberGrid.midpoint(12.0, np.pi / 60.0)


def gaussian(grid, center=0.0, width=1.0):
    return GridFunction.sample(grid, lambda x: np.exp(-((x - center) ** 2) / (2 * width**2)))


def test_spatial_grid_is_symmetric(x_grid):
    assert x_grid.size % 2 == 1
    assert x_grid.node_of(0.0) == x_grid.size // 2
    assert x_grid.node_of(0.025) is None
    assert np.allclose(x_grid.reflect(x_grid.points), -x_grid.points)


def test_wavenumber_grid_skips_zero(k_grid):
    assert not np.any(k_grid.points == 0.0)
    assert np.allclose(k_grid.points, -k_grid.points[::-1])
    assert k_grid.k_max == pytest.approx(12.0, rel=1e-2)
    assert np.all(k_grid.positive > 0)


def test_grid_function_rejects_wrong_shape(x_grid):
    with pytest.raises(ValueError, match="do not match"):
        GridFunction(x_grid, np.zeros(3))


def test_jump_stencil_reads_off_derivative_jumps():
    assert np.allclose(jump_stencil(2), np.array([-1.0, 4.0, -6.0, 4.0, -1.0]) / 2)
    s = np.arange(-8, 9, dtype=float)
    stencil = jump_stencil(8)
    for degree in range(9):
        assert abs(stencil @ s**degree) < 1e-9 * max(1.0, 8.0**degree)
    assert stencil @ np.abs(s) == pytest.approx(2.0)


def test_jump_stencil_order_shrinks_between_close_deltas():
    assert SpatialGrid.symmetric(1.0, 0.05, jumps=(0.0,)).corrected_nodes == [(20, 8)]
    assert SpatialGrid.symmetric(1.0, 0.05, jumps=(-0.1, 0.1)).corrected_nodes == [(18, 4), (22, 4)]
    assert SpatialGrid.symmetric(1.0, 0.05, jumps=(0.0, 0.05)).corrected_nodes == []


def test_kink_quadrature_on_oscillating_integrand():
    grid = SpatialGrid.symmetric(30.0, 0.05, jumps=(0.0,))
    values = np.exp(-np.abs(grid.points)) * np.cos(6.0 * grid.points)
    integral = float(np.sum(grid.weigh(values)))
    assert integral == pytest.approx(2.0 / 37.0, abs=5e-6)
    trapezoid = float(np.sum(values) * grid.spacing)
    assert abs(trapezoid - 2.0 / 37.0) > 1e-4


def test_free_distorted_transform_is_the_fourier_transform(x_grid, k_grid):
    decomp = build_decomposition(FREE, x_grid, k_grid)
    f = gaussian(x_grid, 1.0)
    distorted = distorted_ft(decomp.table, f)
    assert np.max(np.abs(distorted.values - unitary_ft(decomp.table, f).values)) < 1e-12
    # (2 pi)^{-1/2} int e^{-ikx} e^{-(x-1)^2/2} dx = e^{-ik} e^{-k^2/2}
    k = k_grid.points
    assert np.max(np.abs(distorted.values - np.exp(-1j * k - k**2 / 2))) < 1e-10


def test_analysis_and_synthesis_are_adjoint(x_grid, k_grid):
    decomp = build_decomposition(single_delta_spec(-1.0), x_grid, k_grid)
    rng = np.random.default_rng(3)
    f = gaussian(x_grid, -2.0) * (1.0 + 0.5j)
    g = GridFunction(k_grid, rng.normal(size=k_grid.size) + 1j * rng.normal(size=k_grid.size))
    lhs = distorted_ft(decomp.table, f).inner(g)
    rhs = f.inner(distorted_ft_adjoint(decomp.table, g))
    assert abs(lhs - rhs) < 1e-10 * abs(lhs)


def test_bound_states_are_orthonormal(x_grid, k_grid):
    decomp = build_decomposition(double_delta_spec(1.0, 1.0), x_grid, k_grid)
    assert decomp.kappas.size == 2
    assert decomp.diagnostics["orthonormality_residual"] < 1e-12
    _, state = decomp.bound_states[0]
    coefficients = decomp.bound_coefficients(state)
    assert abs(coefficients[0]) == pytest.approx(1.0, abs=1e-10)
    assert abs(coefficients[1]) < 1e-10


def test_projection_of_band_limited_packet(x_grid, k_grid):
    decomp = build_decomposition(single_delta_spec(-1.0), x_grid, k_grid)
    packet = continuous_packet(decomp)
    projection = pc_project(decomp, packet)
    assert projection.discrepancy < 1e-4
    assert projection.function.relative_distance(packet) < 1e-3
    assert abs(spectral_coverage(decomp, packet)) < 1e-3
    assert np.max(np.abs(decomp.bound_coefficients(packet))) < 1e-3


def test_half_line_and_signed_projection_agree(x_grid, k_grid):
    decomp = build_decomposition(double_delta_spec(1.0, 1.0), x_grid, k_grid)
    f = gaussian(x_grid, 0.5, 0.8)
    assert pc_route_agreement(decomp, f) < 1e-12
    two_wave = pc_two_wave(decomp, f)
    assert two_wave.relative_distance(pc_project(decomp, f, check=False).function) < 1e-12


def test_projection_routes_disagree_under_tight_tolerance(x_grid, k_grid):
    decomp = build_decomposition(single_delta_spec(1.0), x_grid, k_grid)
    f = gaussian(x_grid, 0.0, 0.3)
    with pytest.raises(DiscrepancyError):
        pc_project(decomp, f, tolerance=1e-14)
    assert pc_project(decomp, f, check=False).discrepancy > 0.0


def test_lippmann_schwinger_for_delta_waves(x_grid, k_grid):
    decomp = build_decomposition(double_delta_spec(1.0, 1.0), x_grid, k_grid)
    assert decomp.table.source == "transfer-matrix"
    assert lippmann_schwinger_residual(decomp.spec, decomp.table) < 1e-9


def test_jost_and_transfer_waves_agree():
    x_grid = SpatialGrid.symmetric(5.0, 0.05, jumps=[0.0])
    k_grid = WavenumberGrid.midpoint(6.0, np.pi / 20.0)
    assert source_agreement(single_delta_spec(0.5), k_grid, x_grid) < 1e-8


def test_psi_plus_at_a_node(x_grid, k_grid):
    decomp = build_decomposition(FREE, x_grid, k_grid)
    k = k_grid.positive[3]
    value = psi_plus(decomp.table, 1.0, k)
    assert value == pytest.approx(np.exp(1j * k) / np.sqrt(2 * np.pi))
    with pytest.raises(ValueError, match="outside"):
        psi_plus(decomp.table, 0.0, 100.0)


def test_fourier_pair_round_trip(x_grid, k_grid):
    f = gaussian(x_grid)
    transform = fourier_transform(f, k_grid)
    assert np.max(np.abs(transform.values - np.exp(-(k_grid.points**2) / 2) / np.sqrt(2 * np.pi))) < 1e-10
    assert inverse_fourier_transform(transform, x_grid).relative_distance(f) < 1e-8
