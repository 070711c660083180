"""Spectral decomposition: distorted waves for the continuous part and grid-sampled bound
states for the discrete part, with P_c = Id - P_d."""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import linalg

from program.potential.models import PotentialSpec
from program.scattering import any_bound_states
from program.settings.manager import settings_manager
from program.spectral.grids import GridFunction, SpatialGrid, WavenumberGrid
from program.spectral.transforms import distorted_ft, distorted_ft_adjoint, zero_energy_taper
from program.spectral.waves import DistortedWaveTable, Source, build_distorted_waves
from program.utils.logging import logger


class DiscrepancyError(Exception):
    """The two routes to P_c f disagree beyond tolerance; the grids are inadequate."""


@dataclass(frozen=True)
class SpectralDecomposition:
    spec: PotentialSpec
    table: DistortedWaveTable
    kappas: np.ndarray
    # orthonormal bound states as columns, in the grid inner product
    bound_matrix: np.ndarray = field(repr=False)
    diagnostics: dict = field(default_factory=dict)

    @property
    def x_grid(self) -> SpatialGrid:
        return self.table.x_grid

    @property
    def k_grid(self) -> WavenumberGrid:
        return self.table.k_grid

    @property
    def energies(self) -> np.ndarray:
        return -self.kappas**2

    @cached_property
    def bound_states(self) -> list[tuple[float, GridFunction]]:
        return [(float(kappa), GridFunction(self.x_grid, self.bound_matrix[:, j])) for j, kappa in enumerate(self.kappas)]

    def bound_coefficients(self, f: GridFunction) -> np.ndarray:
        """<psi_j, f> for every bound state."""
        return self.bound_matrix.conj().T @ self.x_grid.weigh(f.values)

    def discrete_part(self, f: GridFunction) -> GridFunction:
        return f.with_values(self.bound_matrix @ self.bound_coefficients(f))


def lowdin(states: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Symmetric orthonormalisation S^{-1/2} in the grid inner product."""
    if states.shape[1] == 0:
        return states
    overlap = states.conj().T @ grid.weigh(states)
    values, vectors = linalg.eigh(overlap)
    return states @ (vectors @ np.diag(values**-0.5) @ vectors.conj().T)


def orthonormality_residual(states: np.ndarray, grid: SpatialGrid) -> float:
    if states.shape[1] == 0:
        return 0.0
    overlap = states.conj().T @ grid.weigh(states)
    return float(np.max(np.abs(overlap - np.eye(states.shape[1]))))


def default_grids(spec: PotentialSpec) -> tuple[SpatialGrid, WavenumberGrid]:
    settings = settings_manager.settings.grid
    x_grid = SpatialGrid.symmetric(settings.x_max, settings.dx, jumps=spec.locations)
    dk = np.pi / (4.0 * settings.x_max) if settings.dk is None else settings.dk
    return x_grid, WavenumberGrid.midpoint(settings.k_max, dk)


def build_decomposition(
    spec: PotentialSpec,
    x_grid: SpatialGrid | None = None,
    k_grid: WavenumberGrid | None = None,
    source: Source = "auto",
    quad_dx: float | None = None,
) -> SpectralDecomposition:
    """Distorted waves plus Loewdin-orthonormalised bound states on the grid."""
    defaults = default_grids(spec)
    x_grid = defaults[0] if x_grid is None else x_grid
    k_grid = defaults[1] if k_grid is None else k_grid
    if tuple(x_grid.jumps) != tuple(float(y) for y in spec.locations):
        x_grid = SpatialGrid(x_grid.points, tuple(float(y) for y in spec.locations))
    table = build_distorted_waves(spec, k_grid, x_grid, source, quad_dx)

    states = any_bound_states(spec)
    kappas = np.array([state.kappa for state in states], dtype=float)
    sampled = np.column_stack([state(x_grid.points) for state in states]).astype(complex) if states else np.zeros((x_grid.size, 0), dtype=complex)
    orthonormal = lowdin(sampled, x_grid)
    residual = orthonormality_residual(orthonormal, x_grid)
    tolerance = settings_manager.settings.spectral.orthonormality_tolerance
    if residual > tolerance:
        logger.warning(f"Bound states orthonormal only to {residual:.2e}")
    logger.log("SPECTRAL", f"Decomposition with {kappas.size} bound states, energies {np.round(-kappas**2, 8).tolist()}")
    return SpectralDecomposition(spec, table, kappas, orthonormal, {"orthonormality_residual": residual})


@dataclass(frozen=True)
class Projection:
    function: GridFunction
    # || F_+^* F_+ f - (f - P_d f) || / || f ||
    discrepancy: float


def pc_project(decomp: SpectralDecomposition, f: GridFunction, check: bool = True, tolerance: float | None = None) -> Projection:
    """P_c f through F_+^* F_+, compared with f minus its bound-state components."""
    tolerance = settings_manager.settings.spectral.pc_discrepancy_tolerance if tolerance is None else tolerance
    continuous = distorted_ft_adjoint(decomp.table, distorted_ft(decomp.table, f))
    complement = f - decomp.discrete_part(f)
    scale = f.norm()
    discrepancy = (continuous - complement).norm() / scale if scale > 0 else 0.0
    if check and discrepancy > tolerance:
        raise DiscrepancyError(f"P_c routes differ by {discrepancy:.2e} (tolerance {tolerance:.0e})")
    return Projection(continuous, discrepancy)


def spectral_coverage(decomp: SpectralDecomposition, f: GridFunction) -> float:
    """1 - (||F_+ f||^2 + sum |<psi_j, f>|^2) / ||f||^2, the mass outside the k window."""
    scale = f.norm() ** 2
    if scale == 0:
        return 0.0
    captured = distorted_ft(decomp.table, f).norm() ** 2 + float(np.sum(np.abs(decomp.bound_coefficients(f)) ** 2))
    return 1.0 - captured / scale


def continuous_packet(decomp: SpectralDecomposition, center: float = 3.0, width: float = 1.0) -> GridFunction:
    """F_+^* g for a Gaussian g(k) centred at +-center; band-limited for H by construction.

    g is tapered at k = 0 so the packet stays localised on the spatial window.
    """
    k = decomp.k_grid.points
    profile = np.exp(-((k - center) ** 2) / (2 * width**2)) + 0.5 * np.exp(-((k + center) ** 2) / (2 * width**2))
    profile = profile * zero_energy_taper(k)
    packet = distorted_ft_adjoint(decomp.table, GridFunction(decomp.k_grid, profile.astype(complex)))
    return packet * (1.0 / packet.norm())


def pc_two_wave(decomp: SpectralDecomposition, f: GridFunction) -> GridFunction:
    """P_c f over k > 0 only: (1/2pi) sum_k (e_+ <e_+, f> + e_- <e_-, f>) dk."""
    table = decomp.table
    weighted = decomp.x_grid.weigh(f.values)
    dk = decomp.k_grid.spacing
    values = np.zeros(decomp.x_grid.size, dtype=complex)
    for waves in (table.e_plus, table.e_minus):
        values += waves @ (waves.conj().T @ weighted)
    return f.with_values(values * dk / (2.0 * np.pi))


def pc_route_agreement(decomp: SpectralDecomposition, f: GridFunction) -> float:
    """Relative distance between the signed-k and the half-line forms of P_c f."""
    signed = distorted_ft_adjoint(decomp.table, distorted_ft(decomp.table, f))
    return pc_two_wave(decomp, f).relative_distance(signed)
