"""Bound states of delta potentials: zeros of 1/T(i kappa) = M22(i kappa), kappa > 0."""
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from program.potential.models import PotentialSpec
from program.scattering.transfer import propagate_amplitudes, transfer_matrix_at
from program.settings.manager import settings_manager
from program.utils.logging import logger


def find_sign_changes(fn: Callable[[float], float], upper: float, samples: int) -> np.ndarray:
    """Roots of a real function on (0, upper] by bracketing on a uniform scan plus brentq."""
    kappas = np.linspace(upper / samples, upper, samples)
    values = np.array([fn(kappa) for kappa in kappas])
    roots = []
    for index in range(samples - 1):
        left, right = values[index], values[index + 1]
        if left == 0:
            roots.append(kappas[index])
        elif left * right < 0:
            roots.append(optimize.brentq(fn, kappas[index], kappas[index + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps))
    if values[-1] == 0:
        roots.append(kappas[-1])
    return np.array(sorted(roots, reverse=True), dtype=float)


def search_bound(spec: PotentialSpec) -> float:
    # kappa <= sum |c_j| / 2 for delta sums; the regular part adds sqrt(max |V_reg|)
    upper = 1.0 + float(np.sum(np.abs(spec.strengths)))
    if not spec.regular.is_zero and spec.regular.window is not None:
        lo, hi = spec.regular.window
        points = np.linspace(lo, hi, 2001)
        upper += float(np.sqrt(np.max(np.abs(spec.regular(points)))))
    return upper


@dataclass(frozen=True)
class BoundState:
    """u(x) = A_j e^{-kappa x} + B_j e^{kappa x} between consecutive deltas, unit L2 norm."""

    kappa: float
    locations: np.ndarray
    A: np.ndarray
    B: np.ndarray

    @property
    def energy(self) -> float:
        return -self.kappa**2

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        index = np.searchsorted(self.locations, x, side="right")
        return self.A[index] * np.exp(-self.kappa * x) + self.B[index] * np.exp(self.kappa * x)


def _squared_norm(kappa: float, locations: np.ndarray, A: np.ndarray, B: np.ndarray) -> float:
    two = 2.0 * kappa
    total = B[0] ** 2 * np.exp(two * locations[0]) / two + A[-1] ** 2 * np.exp(-two * locations[-1]) / two
    for j in range(1, locations.size):
        a, b = locations[j - 1], locations[j]
        total += A[j] ** 2 * (np.exp(-two * a) - np.exp(-two * b)) / two
        total += B[j] ** 2 * (np.exp(two * b) - np.exp(two * a)) / two
        total += 2.0 * A[j] * B[j] * (b - a)
    return float(total)


def secular(spec: PotentialSpec, kappa: float) -> float:
    """M22(i kappa), real for real strengths."""
    return float(np.real(transfer_matrix_at(spec, 1j * kappa)[1, 1]))


def _bound_state(spec: PotentialSpec, kappa: float) -> BoundState:
    # e^{-ikx} = e^{kappa x} is the decaying branch on the far left
    coefficients = propagate_amplitudes(spec, 1j * kappa, (0.0, 1.0))
    A = np.real(coefficients.A).copy()
    B = np.real(coefficients.B).copy()
    B[-1] = 0.0
    norm = np.sqrt(_squared_norm(kappa, spec.locations, A, B))
    # B_0 = 1, so the state is positive on the far left
    return BoundState(kappa=kappa, locations=spec.locations, A=A / norm, B=B / norm)


def bound_states(spec: PotentialSpec, samples: int | None = None) -> list[BoundState]:
    """All bound states of a pure delta potential, deepest first."""
    if not spec.is_pure_delta:
        raise ValueError("bound_states needs a pure delta potential; use mixed_bound_states instead")
    if not spec.deltas:
        return []
    samples = settings_manager.settings.scattering.bound_state_samples if samples is None else samples
    kappas = find_sign_changes(lambda kappa: secular(spec, kappa), search_bound(spec), samples)
    states = [_bound_state(spec, kappa) for kappa in kappas]
    if states:
        logger.log("SCATTER", f"Found {len(states)} bound states, energies {[round(s.energy, 8) for s in states]}")
    return states


def bound_state_kappas(spec: PotentialSpec) -> np.ndarray:
    return np.array([state.kappa for state in bound_states(spec)], dtype=float)
