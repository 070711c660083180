"""Scattering coefficients T, R1, R2 on a wavenumber grid.

R2 belongs to incidence from the left (e_+ = e^{ikx} + R2 e^{-ikx} for x << 0) and R1
to incidence from the right (e_- = e^{-ikx} + R1 e^{ikx} for x >> 0). From the total
transfer matrix M: T = 1/M22, R2 = -M21/M22, R1 = M12/M22.
"""
from dataclasses import dataclass, field

import numpy as np

from program.potential.models import PotentialSpec
from program.scattering.transfer import transfer_matrices
from program.settings.manager import settings_manager
from program.utils.logging import logger
from program.utils.parallel import map_chunks


@dataclass(frozen=True)
class ScatteringData:
    k_grid: np.ndarray
    T: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    bound_state_kappas: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    source: str = "transfer-matrix"
    diagnostics: dict = field(default_factory=dict)

    @property
    def energies(self) -> np.ndarray:
        return -self.bound_state_kappas**2

    def unitarity_residual(self) -> float:
        """max over the grid of both | |T|^2 + |R_j|^2 - 1 |."""
        if self.k_grid.size == 0:
            return 0.0
        t2 = np.abs(self.T) ** 2
        return float(max(
            np.max(np.abs(t2 + np.abs(self.R1) ** 2 - 1)),
            np.max(np.abs(t2 + np.abs(self.R2) ** 2 - 1)),
        ))

    def conjugate_symmetry_residual(self, other: "ScatteringData") -> float:
        """Compare this data with `other` computed on the mirrored grid -k."""
        return float(max(
            np.max(np.abs(other.T - np.conj(self.T))),
            np.max(np.abs(other.R1 - np.conj(self.R1))),
            np.max(np.abs(other.R2 - np.conj(self.R2))),
        ))

    def with_bound_states(self, kappas: np.ndarray) -> "ScatteringData":
        return ScatteringData(self.k_grid, self.T, self.R1, self.R2, np.asarray(kappas, dtype=float), self.source, self.diagnostics)


def default_k_grid(k_lo: float | None = None, k_hi: float | None = None, nodes: int | None = None) -> np.ndarray:
    """Half logarithmic, half linear nodes over [k_lo, k_hi]; negative k follow by conjugation."""
    settings = settings_manager.settings.scattering
    k_lo = settings.k_lo if k_lo is None else k_lo
    k_hi = settings.k_hi if k_hi is None else k_hi
    nodes = settings.k_nodes if nodes is None else nodes
    if not 0 < k_lo < k_hi:
        raise ValueError(f"need 0 < k_lo < k_hi, got {k_lo}, {k_hi}")
    n_log = nodes // 2
    n_lin = nodes - n_log
    logarithmic = np.geomspace(k_lo, k_hi, n_log)
    linear = np.linspace(k_lo, k_hi, n_lin + 2)[1:-1]
    return np.unique(np.concatenate([logarithmic, linear]))


def coefficients_from_matrices(matrices: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m22 = matrices[..., 1, 1]
    return 1.0 / m22, matrices[..., 0, 1] / m22, -matrices[..., 1, 0] / m22


def scattering_coeffs(spec: PotentialSpec, k_grid) -> ScatteringData:
    """T, R1, R2 of a pure delta potential on real nonzero k."""
    k_grid = np.asarray(k_grid, dtype=float)
    workers = settings_manager.settings.scattering.max_workers

    def evaluate(chunk):
        return np.stack(coefficients_from_matrices(transfer_matrices(spec, chunk)), axis=-1)

    stacked = map_chunks(evaluate, k_grid, workers) if k_grid.size else np.zeros((0, 3), dtype=complex)
    data = ScatteringData(k_grid, stacked[:, 0], stacked[:, 1], stacked[:, 2])
    logger.log("SCATTER", f"Transfer-matrix coefficients on {k_grid.size} wavenumbers, unitarity residual {data.unitarity_residual():.2e}")
    return data
