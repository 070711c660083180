"""Distorted plane waves e_+ and e_- on a spatial grid.

e_+ = e^{ikx} + R2 e^{-ikx} on the far left and T e^{ikx} on the far right;
e_- = T e^{-ikx} on the far left and e^{-ikx} + R1 e^{ikx} on the far right.
Pure delta potentials use the piecewise plane waves of the transfer matrices; any
potential can use the Jost route e_+ = T f1, e_- = T f2.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np

from program.jost.volterra import solve_jost
from program.potential.models import PotentialSpec
from program.scattering.transfer import plane_wave_coefficients
from program.spectral.grids import SpatialGrid, WavenumberGrid
from program.utils.logging import logger

Source = Literal["auto", "transfer-matrix", "jost"]
NORMALIZATION = 1.0 / np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class DistortedWaveTable:
    """e_+ and e_- on x_grid for the positive half of k_grid; columns follow k."""

    x_grid: SpatialGrid
    k_grid: WavenumberGrid
    e_plus: np.ndarray = field(repr=False)
    e_minus: np.ndarray = field(repr=False)
    T: np.ndarray = field(repr=False)
    R1: np.ndarray = field(repr=False)
    R2: np.ndarray = field(repr=False)
    source: str = "transfer-matrix"
    diagnostics: dict = field(default_factory=dict)

    @property
    def wavenumbers(self) -> np.ndarray:
        return self.k_grid.positive

    @cached_property
    def psi(self) -> np.ndarray:
        """Psi_+(x, k) on x_grid x signed k_grid: e_-(x, -k) for k < 0, e_+(x, k) for k > 0."""
        return NORMALIZATION * np.hstack([self.e_minus[:, ::-1], self.e_plus])

    @cached_property
    def psi_minus(self) -> np.ndarray:
        """Psi_-(x, k) = conj(Psi_+(x, -k))."""
        return np.conj(self.psi[:, ::-1])

    @cached_property
    def free_psi(self) -> np.ndarray:
        """e^{ikx} / sqrt(2 pi) on the same grids."""
        return NORMALIZATION * np.exp(1j * np.outer(self.x_grid.points, self.k_grid.points))


def _transfer_waves(spec: PotentialSpec, k: np.ndarray, x: np.ndarray):
    e_plus = np.empty((x.size, k.size), dtype=complex)
    e_minus = np.empty((x.size, k.size), dtype=complex)
    T = np.empty(k.size, dtype=complex)
    R1 = np.empty(k.size, dtype=complex)
    R2 = np.empty(k.size, dtype=complex)
    for column, wavenumber in enumerate(k):
        plus = plane_wave_coefficients(spec, wavenumber, side="plus")
        minus = plane_wave_coefficients(spec, wavenumber, side="minus")
        e_plus[:, column] = plus(x)
        e_minus[:, column] = minus(x)
        T[column] = plus.A[-1]
        R2[column] = plus.B[0]
        R1[column] = minus.A[-1]
    return e_plus, e_minus, T, R1, R2


def _jost_waves(spec: PotentialSpec, k: np.ndarray, x: np.ndarray, quad_dx: float | None):
    jost = solve_jost(spec, k, x, quad_dx=quad_dx)
    return jost.e_plus(), jost.e_minus(), jost.T, jost.R1, jost.R2


def build_distorted_waves(
    spec: PotentialSpec,
    k_grid: WavenumberGrid,
    x_grid: SpatialGrid,
    source: Source = "auto",
    quad_dx: float | None = None,
) -> DistortedWaveTable:
    """e_+ and e_- for every positive k of the signed grid."""
    k = k_grid.positive
    if np.any(k <= 0):
        raise ValueError("the wavenumber grid must exclude k = 0")
    if source == "auto":
        source = "transfer-matrix" if spec.is_pure_delta else "jost"
    x = x_grid.points
    if source == "transfer-matrix":
        waves = _transfer_waves(spec, k, x)
    elif source == "jost":
        waves = _jost_waves(spec, k, x, quad_dx)
    else:
        raise ValueError(f"unknown distorted-wave source '{source}'")
    logger.log("SPECTRAL", f"Distorted waves by {source} on {x.size} x {k.size} nodes")
    return DistortedWaveTable(x_grid, k_grid, *waves, source=source)


def source_agreement(spec: PotentialSpec, k_grid: WavenumberGrid, x_grid: SpatialGrid, quad_dx: float | None = None) -> float:
    """max |e_+/-(transfer) - e_+/-(Jost)| for a pure delta potential."""
    transfer = build_distorted_waves(spec, k_grid, x_grid, "transfer-matrix")
    jost = build_distorted_waves(spec, k_grid, x_grid, "jost", quad_dx)
    return float(max(np.max(np.abs(transfer.e_plus - jost.e_plus)), np.max(np.abs(transfer.e_minus - jost.e_minus))))


def psi_plus(table: DistortedWaveTable, x, k) -> np.ndarray:
    """Psi_+(x, k) at grid nodes: the nearest x node and the signed k node."""
    x_index = np.rint((np.asarray(x, dtype=float) - table.x_grid.points[0]) / table.x_grid.spacing).astype(int)
    k_index = np.rint(np.asarray(k, dtype=float) / table.k_grid.spacing - 0.5).astype(int) + table.k_grid.half
    if np.any((k_index < 0) | (k_index >= table.k_grid.size)):
        raise ValueError("k outside the wavenumber grid")
    return table.psi[x_index, k_index]


def psi_minus(table: DistortedWaveTable, x, k) -> np.ndarray:
    return np.conj(psi_plus(table, x, -np.asarray(k, dtype=float)))


def free_resolvent(k: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Outgoing kernel of (-d^2 - k^2 - i0)^{-1}: -e^{ik|x-y|} / (2ik)."""
    return -np.exp(1j * k * np.abs(np.subtract.outer(x, y))) / (2j * k)


def lippmann_schwinger_residual(spec: PotentialSpec, table: DistortedWaveTable, columns=None) -> float:
    """sup |e_+ - e^{ikx} + R_0(k) V e_+| over x_grid for the selected positive-k columns.

    Deltas contribute c_j G(x - y_j) e_+(y_j); the regular part is integrated by the
    trapezoid rule on the grid nodes inside its window.
    """
    x = table.x_grid.points
    k = table.wavenumbers
    columns = range(0, k.size, max(k.size // 8, 1)) if columns is None else columns
    window = spec.regular.window
    inside = (x >= window[0]) & (x <= window[1]) if window is not None else np.zeros(x.size, dtype=bool)
    weights = np.full(x.size, table.x_grid.spacing)
    worst = 0.0
    for column in columns:
        wave = table.e_plus[:, column]
        scattered = np.zeros(x.size, dtype=complex)
        for delta in spec.deltas:
            value = np.interp(delta.y, x, wave.real) + 1j * np.interp(delta.y, x, wave.imag)
            scattered += delta.c * free_resolvent(k[column], x, np.array([delta.y]))[:, 0] * value
        if np.any(inside):
            kernel = free_resolvent(k[column], x, x[inside])
            scattered += kernel @ (spec.regular(x[inside]) * wave[inside] * weights[inside])
        residual = wave - np.exp(1j * k[column] * x) + scattered
        worst = max(worst, float(np.max(np.abs(residual))))
    logger.log("SPECTRAL", f"Lippmann-Schwinger residual {worst:.2e}")
    return worst
