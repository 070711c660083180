"""Distorted and free Fourier transforms on the shared grids.

Analysis integrates over x with the grid's weight matrix, synthesis sums over k with
weight dk; with these weights each synthesis is the exact adjoint of its analysis.
"""
import numpy as np

from program.settings.manager import settings_manager
from program.spectral.grids import GridFunction, SpatialGrid, WavenumberGrid
from program.spectral.waves import DistortedWaveTable
from program.utils.logging import logger


def truncation_warning(f: GridFunction, tolerance: float | None = None) -> str | None:
    """Message when f has not decayed at the edges of its grid."""
    tolerance = settings_manager.settings.spectral.truncation_tolerance if tolerance is None else tolerance
    edge = max(abs(f.values[0]), abs(f.values[-1]))
    if edge > tolerance * max(f.sup(), np.finfo(float).tiny):
        message = f"Support truncation: |f| = {edge:.2e} at the grid edge"
        logger.warning(message)
        return message
    return None


def _analysis(basis: np.ndarray, f: GridFunction, k_grid: WavenumberGrid) -> GridFunction:
    grid = f.grid
    if not isinstance(grid, SpatialGrid):
        raise TypeError("analysis expects a function on the spatial grid")
    truncation_warning(f)
    return GridFunction(k_grid, basis.conj().T @ grid.weigh(f.values))


def _synthesis(basis: np.ndarray, g: GridFunction, x_grid: SpatialGrid) -> GridFunction:
    if not isinstance(g.grid, WavenumberGrid):
        raise TypeError("synthesis expects a function on the wavenumber grid")
    return GridFunction(x_grid, basis @ g.grid.weigh(g.values))


def distorted_ft(table: DistortedWaveTable, f: GridFunction) -> GridFunction:
    """F_+ f(k) = int conj(Psi_+(y, k)) f(y) dy."""
    return _analysis(table.psi, f, table.k_grid)


def distorted_ft_adjoint(table: DistortedWaveTable, g: GridFunction) -> GridFunction:
    """F_+^* g(x) = int Psi_+(x, k) g(k) dk."""
    return _synthesis(table.psi, g, table.x_grid)


def incoming_ft(table: DistortedWaveTable, f: GridFunction) -> GridFunction:
    """F_- f(k) = int conj(Psi_-(y, k)) f(y) dy."""
    return _analysis(table.psi_minus, f, table.k_grid)


def incoming_ft_adjoint(table: DistortedWaveTable, g: GridFunction) -> GridFunction:
    return _synthesis(table.psi_minus, g, table.x_grid)


def unitary_ft(table: DistortedWaveTable, f: GridFunction) -> GridFunction:
    """F_0 f(k) = (2 pi)^{-1/2} int e^{-ikx} f(x) dx, the free counterpart of F_+."""
    return _analysis(table.free_psi, f, table.k_grid)


def unitary_ft_adjoint(table: DistortedWaveTable, g: GridFunction) -> GridFunction:
    return _synthesis(table.free_psi, g, table.x_grid)


def fourier_transform(f: GridFunction, k_grid: WavenumberGrid) -> GridFunction:
    """phi_hat(k) = (1/2 pi) int e^{-ikx} phi(x) dx."""
    x = f.grid.points
    kernel = np.exp(-1j * np.outer(k_grid.points, x)) / (2.0 * np.pi)
    return GridFunction(k_grid, kernel @ f.grid.weigh(f.values))


def inverse_fourier_transform(g: GridFunction, x_grid: SpatialGrid) -> GridFunction:
    """phi(x) = int e^{ikx} phi_hat(k) dk, inverse of fourier_transform."""
    kernel = np.exp(1j * np.outer(x_grid.points, g.grid.points))
    return GridFunction(x_grid, kernel @ g.grid.weigh(g.values))


def free_multiplier(table: DistortedWaveTable, f: GridFunction, symbol) -> GridFunction:
    """symbol(D^2) f = F_0^* symbol(k^2) F_0 f."""
    transformed = unitary_ft(table, f)
    return unitary_ft_adjoint(table, transformed.with_values(symbol(table.k_grid.points**2) * transformed.values))


def distorted_multiplier(table: DistortedWaveTable, f: GridFunction, symbol) -> GridFunction:
    """symbol(H) P_c f = F_+^* symbol(k^2) F_+ f."""
    transformed = distorted_ft(table, f)
    return distorted_ft_adjoint(table, transformed.with_values(symbol(table.k_grid.points**2) * transformed.values))


def zero_energy_taper(k, scale: float = 1.0, order: int = 2) -> np.ndarray:
    """(k^2 / (k^2 + scale^2))^order, vanishing to order 2*order at k = 0.

    Generic potentials have T(0) = 0, so Psi_+ has a kink in k at zero and the
    synthesis of a spectrum with g(0) != 0 decays only like 1/|x|.
    """
    if scale <= 0:
        raise ValueError("the taper scale must be positive")
    k2 = np.asarray(k, dtype=float) ** 2
    return (k2 / (k2 + scale**2)) ** order
