import numpy as np
import pytest

from program.jost import b1_kernel
from program.potential import FREE, PotentialSpec, RegularPart, single_delta_spec
from program.settings.manager import settings_manager
from program.spectral import GridFunction, SpatialGrid, WavenumberGrid, build_decomposition
from program.waveops import (
    FrequencyCutoff,
    KernelOperator,
    apply_wminus,
    apply_wminus_star,
    apply_wplus,
    apply_wplus_star,
    default_borels,
    family_stability,
    frequency_split,
    hilbert_transform,
    identity_residuals,
    intertwining_check,
    parity,
    reassemble_wplus,
    seeded_family,
    sj_kernel,
    smoothstep5,
    sobolev_ratio,
    spatial_cutoff,
    young_chain,
    young_constant,
    zero_energy_filter,
)


@pytest.fixture
def x_grid():
    return SpatialGrid.symmetric(15.0, 0.05)


@pytest.fixture
def k_grid():
    return WavenumberGrid.midpoint(12.0, np.pi / 60.0)


@pytest.fixture
def free(x_grid, k_grid):
    return build_decomposition(FREE, x_grid, k_grid)


@pytest.fixture
def repulsive(x_grid, k_grid):
    return build_decomposition(single_delta_spec(1.0), x_grid, k_grid)


def gaussian(grid, center=0.0, width=1.0):
    return GridFunction.sample(grid, lambda x: np.exp(-((x - center) ** 2) / (2 * width**2)))


def test_hilbert_transform_of_cosine():
    grid = SpatialGrid(2 * np.pi * np.arange(128) / 128)
    f = GridFunction.sample(grid, lambda x: np.cos(3 * x))
    assert np.max(np.abs(hilbert_transform(f).values - np.sin(3 * grid.points))) < 1e-12


def test_hilbert_transform_is_an_involution_up_to_sign():
    grid = SpatialGrid(2 * np.pi * np.arange(128) / 128)
    f = GridFunction.sample(grid, lambda x: np.cos(3 * x) + 0.5 * np.sin(5 * x) - 0.2 * np.cos(11 * x))
    assert np.max(np.abs(hilbert_transform(hilbert_transform(f)).values + f.values)) < 1e-12
    constant = GridFunction(grid, np.full(grid.size, 2.5))
    assert np.max(np.abs(hilbert_transform(constant).values)) < 1e-12


def test_smoothstep_and_cutoffs():
    assert np.allclose(smoothstep5(np.array([-1.0, 0.0, 0.5, 1.0, 2.0])), [0.0, 0.0, 0.5, 1.0, 1.0])
    cutoff = FrequencyCutoff(2.0)
    assert np.allclose(cutoff(np.array([0.0, 2.0, -2.0, 4.0, 9.0])), [1.0, 1.0, 1.0, 0.0, 0.0])
    assert np.allclose(spatial_cutoff([0.0, 0.5, 1.0, 3.0]), [0.0, 0.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        FrequencyCutoff(0.0)


def test_frequency_split_adds_up(x_grid):
    f = gaussian(x_grid, 1.0, 0.2)
    low, high = frequency_split(f, FrequencyCutoff(3.0))
    assert np.allclose((low + high).values, f.values)
    assert high.norm() > 0.0
    wide_low, wide_high = frequency_split(gaussian(x_grid), FrequencyCutoff(20.0))
    assert wide_high.norm() < 1e-12


def test_parity_reflects(x_grid):
    f = gaussian(x_grid, 2.0)
    assert np.allclose(parity(f).values, gaussian(x_grid, -2.0).values)


def test_free_wave_operator_is_the_identity(free, x_grid):
    f = gaussian(x_grid, 1.0)
    assert apply_wplus(free, f).relative_distance(f) < 1e-10
    assert apply_wplus_star(free, f).relative_distance(f) < 1e-10
    report = identity_residuals(free, f)
    assert report.isometry < 1e-10
    assert report.star_then_w < 1e-10
    assert report.w_then_star < 1e-10


def test_identities_for_a_repulsive_delta(repulsive, x_grid):
    f = zero_energy_filter(gaussian(x_grid, -1.0))
    g = zero_energy_filter(gaussian(x_grid, 2.0, 0.7)) * 1j
    report = identity_residuals(repulsive, f, g)
    assert report.adjointness < 1e-10, "analysis and synthesis are exact adjoints"
    assert report.isometry < 1e-5
    assert report.star_then_w < 1e-5
    assert report.w_then_star < 1e-5


def test_identities_on_the_default_grid_family():
    spec = single_delta_spec(1.0)
    decomp = build_decomposition(spec)
    assert decomp.x_grid.spacing == pytest.approx(0.05)
    for f in seeded_family(decomp.x_grid, 4, seed=11):
        report = identity_residuals(decomp, f)
        assert report.star_then_w < 1e-5
        assert report.w_then_star < 1e-5
        image = apply_wplus(decomp, f)
        for name in ("propagator", "resolvent"):
            assert intertwining_check(decomp, image, default_borels()[name]) < 1e-5, name


def test_intertwining_on_an_image(repulsive, x_grid):
    image = apply_wplus(repulsive, zero_energy_filter(gaussian(x_grid, 0.5)))
    borels = default_borels(t=0.5)
    for name in ("propagator", "resolvent"):
        assert intertwining_check(repulsive, image, borels[name]) < 1e-5, name


def test_seeded_family_is_a_prefix(x_grid):
    small = seeded_family(x_grid, 4, seed=5)
    large = seeded_family(x_grid, 8, seed=5)
    for a, b in zip(small, large):
        assert np.array_equal(a.values, b.values)
        assert a.norm() == pytest.approx(1.0)
    assert not np.array_equal(seeded_family(x_grid, 1, seed=6)[0].values, small[0].values)


def test_free_sobolev_ratio_is_one(free, x_grid):
    family = seeded_family(x_grid, 8, seed=1)
    for p in (1.5, 2.0, 4.0):
        assert sobolev_ratio(free, p, family).ratio == pytest.approx(1.0, abs=1e-5)
    assert family_stability(free, 2.0, size=4, seed=1).passed


def test_sobolev_ratio_rejects_p_at_most_one(free, x_grid):
    with pytest.raises(ValueError, match="p must exceed 1"):
        sobolev_ratio(free, 1.0, seeded_family(x_grid, 2))
    with pytest.raises(ValueError, match="empty"):
        sobolev_ratio(free, 2.0, [])


def test_young_constant_of_an_indicator():
    grid = np.linspace(0.0, 1.0, 11)
    op = KernelOperator(grid, grid, np.ones((11, 11)))
    assert young_constant(op) == pytest.approx(2.2)
    with pytest.raises(ValueError, match="does not match"):
        KernelOperator(grid, grid[:5], np.ones((11, 11)))


def test_sj_kernel_of_a_delta():
    b1 = b1_kernel(single_delta_spec(0.5), np.linspace(-1.0, 1.0, 5), k_max=50.0)
    with pytest.raises(ValueError, match="which"):
        sj_kernel(b1, which=3)
    op = sj_kernel(b1)
    assert op.name == "S1"
    assert op.values.shape[0] == 5
    report = young_chain(single_delta_spec(0.5), op)
    assert report.weighted_norm == 0.0
    assert report.ratio is None


def test_free_kernel_is_zero():
    b1 = b1_kernel(FREE, np.linspace(-1.0, 1.0, 5), k_max=50.0)
    assert sj_kernel(b1).is_zero


def test_young_constant_settles_under_refinement():
    box = PotentialSpec(regular=RegularPart(kind="box", params={"height": 0.5, "left": -1.0, "right": 1.0}))
    x = np.linspace(-2.0, 2.0, 21)
    coarse = young_chain(box, sj_kernel(b1_kernel(box, x, k_max=100.0)))
    fine = young_chain(box, sj_kernel(b1_kernel(box, x, k_max=200.0, quad_dx=5e-4)))
    assert coarse.weighted_norm == fine.weighted_norm > 0.0
    assert fine.ratio == pytest.approx(coarse.ratio, rel=settings_manager.settings.jost.refinement_tolerance)


def test_six_term_reassembly(repulsive, x_grid):
    phi = gaussian(x_grid, 1.0)
    result = reassemble_wplus(repulsive, phi, FrequencyCutoff(3.0))
    assert len(result.terms) == 6
    assert np.all(result.x >= 0.0)
    assert result.residual < 1e-6


def test_zero_energy_filter_removes_the_mean(x_grid):
    f = zero_energy_filter(gaussian(x_grid))
    assert abs(np.sum(f.values) * f.spacing) < 1e-10
    with pytest.raises(ValueError, match="scale"):
        zero_energy_filter(f, scale=0.0)


def test_incoming_wave_operator(free, repulsive, x_grid):
    f = gaussian(x_grid, 1.0)
    assert apply_wminus(free, f).relative_distance(f) < 1e-10
    filtered = zero_energy_filter(gaussian(x_grid, -1.0))
    image = apply_wminus(repulsive, filtered)
    assert image.norm() == pytest.approx(filtered.norm(), rel=1e-4)
    assert apply_wminus_star(repulsive, image).relative_distance(filtered) < 1e-4
    assert image.relative_distance(apply_wplus(repulsive, filtered)) > 1e-3
