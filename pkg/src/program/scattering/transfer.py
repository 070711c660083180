"""Transfer matrices for finite delta configurations.

Amplitudes (A, B) describe A e^{ikx} + B e^{-ikx}. Crossing a delta of strength c
at y maps the left pair to the right pair through

    J = [[1 + b, b e^{-2iky}], [-b e^{2iky}, 1 - b]],   b = c / (2ik),

and the whole configuration is M = J_N ... J_1 (rightmost delta on the left).
"""
from dataclasses import dataclass

import numpy as np

from program.potential.models import PotentialSpec


class ZeroWavenumberError(Exception):
    """Transfer matrices are singular at k = 0."""


def _check_pure_delta(spec: PotentialSpec):
    if not spec.is_pure_delta:
        raise ValueError("transfer matrices need a pure delta potential; use mixed_scattering instead")


def _as_wavenumbers(k) -> np.ndarray:
    k = np.asarray(k, dtype=complex)
    if np.any(k == 0):
        raise ZeroWavenumberError("k = 0 is not allowed")
    return k


def delta_matrix(c: float, y: float, k) -> np.ndarray:
    """Jump matrix of one delta, shape k.shape + (2, 2)."""
    k = _as_wavenumbers(k)
    b = c / (2j * k)
    phase = np.exp(2j * k * y)
    out = np.empty(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1 + b
    out[..., 0, 1] = b / phase
    out[..., 1, 0] = -b * phase
    out[..., 1, 1] = 1 - b
    return out


def transfer_matrices(spec: PotentialSpec, k) -> np.ndarray:
    """Total transfer matrix for every entry of k, shape k.shape + (2, 2)."""
    _check_pure_delta(spec)
    k = _as_wavenumbers(k)
    total = np.broadcast_to(np.eye(2, dtype=complex), k.shape + (2, 2)).copy()
    for delta in spec.deltas:
        total = delta_matrix(delta.c, delta.y, k) @ total
    return total


def transfer_matrix_at(spec: PotentialSpec, k: complex) -> np.ndarray:
    """2x2 transfer matrix from far-left to far-right amplitudes at one k."""
    return transfer_matrices(spec, np.asarray(k))


@dataclass(frozen=True)
class PlaneWaveCoefficients:
    """Amplitudes on the N+1 intervals cut out by the delta locations."""

    k: complex
    locations: np.ndarray
    A: np.ndarray
    B: np.ndarray

    def interval_index(self, x) -> np.ndarray:
        # a point sitting on y_j belongs to the interval on its right; u is continuous there
        return np.searchsorted(self.locations, np.asarray(x, dtype=float), side="right")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        index = self.interval_index(x)
        return self.A[index] * np.exp(1j * self.k * x) + self.B[index] * np.exp(-1j * self.k * x)

    def derivative(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        index = self.interval_index(x)
        return 1j * self.k * (self.A[index] * np.exp(1j * self.k * x) - self.B[index] * np.exp(-1j * self.k * x))


def propagate_amplitudes(spec: PotentialSpec, k: complex, left: tuple[complex, complex]) -> PlaneWaveCoefficients:
    """Carry the far-left pair across every delta."""
    _check_pure_delta(spec)
    k = complex(_as_wavenumbers(k))
    pairs = [np.asarray(left, dtype=complex)]
    for delta in spec.deltas:
        pairs.append(delta_matrix(delta.c, delta.y, k) @ pairs[-1])
    pairs = np.array(pairs)
    return PlaneWaveCoefficients(k=k, locations=spec.locations, A=pairs[:, 0], B=pairs[:, 1])


def plane_wave_coefficients(spec: PotentialSpec, k: float, side: str = "plus") -> PlaneWaveCoefficients:
    """Piecewise amplitudes of e_+ (A_0 = 1, B_N = 0) or e_- (A_0 = 0, B_N = 1)."""
    matrix = transfer_matrix_at(spec, k)
    if side == "plus":
        return propagate_amplitudes(spec, k, (1.0, -matrix[1, 0] / matrix[1, 1]))
    if side == "minus":
        return propagate_amplitudes(spec, k, (0.0, 1.0 / matrix[1, 1]))
    raise ValueError(f"side must be 'plus' or 'minus', got '{side}'")
