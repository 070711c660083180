"""Scattering for deltas plus a regular part by integrating -u'' + V_reg u = k^2 u.

The state (u, u') is carried across the potential window: analytically on free
segments, with an adaptive Runge-Kutta solve where V_reg lives, and through the
jump u' -> u' + c u at every delta. Far-field amplitudes follow from
A = (u + u'/(ik)) e^{-ikx} / 2 and B = (u - u'/(ik)) e^{ikx} / 2.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from program.potential.models import PotentialSpec
from program.potential.norms import integrate_piecewise
from program.scattering.bound_states import find_sign_changes, search_bound
from program.scattering.coefficients import ScatteringData
from program.scattering.transfer import ZeroWavenumberError
from program.settings.manager import settings_manager
from program.utils.logging import logger
from program.utils.parallel import map_chunks


class StepSizeUnderflowError(Exception):
    """The adaptive integrator could not take a step above machine spacing."""


def _free_step(k: complex, length: float) -> np.ndarray:
    if k == 0:
        return np.array([[1.0, length], [0.0, 1.0]], dtype=complex)
    return np.array(
        [[np.cos(k * length), np.sin(k * length) / k], [-k * np.sin(k * length), np.cos(k * length)]],
        dtype=complex,
    )


def amplitudes(k: complex, x: float, state: np.ndarray) -> tuple[complex, complex]:
    """Plane-wave pair (A, B) matching (u, u') at x."""
    u, du = state[0], state[1]
    return (u + du / (1j * k)) * np.exp(-1j * k * x) / 2, (u - du / (1j * k)) * np.exp(1j * k * x) / 2


def plane_state(k: complex, x: float, A: complex, B: complex) -> np.ndarray:
    forward, backward = np.exp(1j * k * x), np.exp(-1j * k * x)
    return np.array([A * forward + B * backward, 1j * k * (A * forward - B * backward)], dtype=complex)


class SegmentPropagator:
    """Carries (u, u') states across the support of a potential."""

    def __init__(self, spec: PotentialSpec, rtol: float | None = None, atol: float | None = None):
        settings = settings_manager.settings.scattering
        self.spec = spec
        self.rtol = settings.ode_rtol if rtol is None else rtol
        self.atol = settings.ode_atol if atol is None else atol
        self.jumps = {float(d.y): float(d.c) for d in spec.deltas}
        self.window = spec.regular.window
        points = set(self.jumps)
        if self.window is not None:
            lo, hi = self.window
            points.update([lo, hi])
            points.update(p for p in spec.regular.breakpoints if lo < p < hi)
        self.points = np.array(sorted(points), dtype=float)

    @property
    def left(self) -> float:
        return float(self.points[0]) if self.points.size else 0.0

    @property
    def right(self) -> float:
        return float(self.points[-1]) if self.points.size else 0.0

    def _is_regular(self, a: float, b: float) -> bool:
        if self.window is None:
            return False
        lo, hi = self.window
        return min(a, b) >= lo and max(a, b) <= hi

    def _ode(self, k: complex, state: np.ndarray, a: float, b: float, dense: bool = False):
        columns = state.shape[1]
        k2 = k * k
        regular = self.spec.regular
        # sample V strictly inside the segment so edge values of a jump never enter a stage
        inset = 1e-12 * abs(b - a)
        lo, hi = min(a, b) + inset, max(a, b) - inset

        def rhs(t, y):
            u = y[:columns]
            return np.concatenate([y[columns:], (float(regular(min(max(t, lo), hi))) - k2) * u])

        solution = integrate.solve_ivp(
            rhs,
            (a, b),
            state.reshape(-1).astype(complex),
            method="DOP853",
            rtol=self.rtol,
            atol=self.atol,
            dense_output=dense,
        )
        if solution.status == -1:
            raise StepSizeUnderflowError(f"integration on [{a}, {b}] at k={k} failed: {solution.message}")
        return solution.y[:, -1].reshape(2, columns), solution

    def _segment(self, k: complex, state: np.ndarray, a: float, b: float, dense: bool = False):
        if a == b:
            return state, None
        if self._is_regular(a, b):
            return self._ode(k, state, a, b, dense)
        return _free_step(k, b - a) @ state, None

    def forward(self, k: complex, state: np.ndarray) -> np.ndarray:
        """Carry states given just left of the first point to just right of the last one."""
        state = np.asarray(state, dtype=complex).reshape(2, -1)
        for index, point in enumerate(self.points):
            if point in self.jumps:
                state = state.copy()
                state[1] = state[1] + self.jumps[point] * state[0]
            if index + 1 < self.points.size:
                state, _ = self._segment(k, state, point, self.points[index + 1])
        return state

    def backward(self, k: complex, state: np.ndarray) -> np.ndarray:
        """Carry states given just right of the last point back to just left of the first one."""
        state = np.asarray(state, dtype=complex).reshape(2, -1)
        for index in range(self.points.size - 1, -1, -1):
            point = self.points[index]
            if point in self.jumps:
                state = state.copy()
                state[1] = state[1] - self.jumps[point] * state[0]
            if index > 0:
                state, _ = self._segment(k, state, point, self.points[index - 1])
        return state


@dataclass(frozen=True)
class MixedPoint:
    T: complex
    R1: complex
    R2: complex
    wronskian_T: complex


def _solve_at(propagator: SegmentPropagator, k: float) -> MixedPoint:
    if k == 0:
        raise ZeroWavenumberError("k = 0 is not allowed")
    left, right = propagator.left, propagator.right
    # columns: e^{ikx} and e^{-ikx} entering from the left
    basis = np.column_stack([plane_state(k, left, 1, 0), plane_state(k, left, 0, 1)])
    carried = propagator.forward(k, basis)
    matrix = np.column_stack([amplitudes(k, right, carried[:, 0]), amplitudes(k, right, carried[:, 1])])
    m22 = matrix[1, 1]
    T, R1, R2 = 1.0 / m22, matrix[0, 1] / m22, -matrix[1, 0] / m22

    # independent route: f_1 carried back from the right, then W[f_1, f_2] = -2ik / T
    f1_left = propagator.backward(k, plane_state(k, right, 1, 0))[:, 0]
    f2_left = plane_state(k, left, 0, 1)
    wronskian = f1_left[0] * f2_left[1] - f1_left[1] * f2_left[0]
    return MixedPoint(T, R1, R2, -2j * k / wronskian)


def mixed_scattering(spec: PotentialSpec, k_grid) -> ScatteringData:
    """T, R1, R2 for deltas plus a compactly supported (or windowed) regular part."""
    k_grid = np.asarray(k_grid, dtype=float)
    if np.any(k_grid == 0):
        raise ZeroWavenumberError("k = 0 is not allowed")
    propagator = SegmentPropagator(spec)

    def evaluate(chunk):
        points = [_solve_at(propagator, k) for k in chunk]
        return np.array([[p.T, p.R1, p.R2, p.wronskian_T] for p in points], dtype=complex).reshape(-1, 4)

    stacked = map_chunks(evaluate, k_grid, settings_manager.settings.scattering.max_workers)
    discrepancy = float(np.max(np.abs(stacked[:, 0] - stacked[:, 3]))) if k_grid.size else 0.0
    data = ScatteringData(
        k_grid,
        stacked[:, 0],
        stacked[:, 1],
        stacked[:, 2],
        source="ode",
        diagnostics={"wronskian_discrepancy": discrepancy},
    )
    logger.log(
        "SCATTER",
        f"ODE coefficients on {k_grid.size} wavenumbers, unitarity residual {data.unitarity_residual():.2e}, "
        f"Wronskian discrepancy {discrepancy:.2e}",
    )
    return data


@dataclass(frozen=True)
class MixedBoundState:
    """Bound state evaluated from the carried ODE solution, unit L2 norm.

    Each piece is (a, b, ode solution or None, (u, u') at a).
    """

    kappa: float
    left: float
    right: float
    pieces: list = field(repr=False)
    right_value: float = 1.0
    scale: float = 1.0

    @property
    def energy(self) -> float:
        return -self.kappa**2

    def _raw(self, x: np.ndarray) -> np.ndarray:
        kappa = self.kappa
        values = np.where(x < self.left, np.exp(kappa * (x - self.left)), 0.0)
        values = np.where(x >= self.right, self.right_value * np.exp(-kappa * (x - self.right)), values)
        for a, b, solution, (u, du) in self.pieces:
            inside = (x >= a) & (x < b)
            if not np.any(inside):
                continue
            if solution is None:
                s = x[inside] - a
                values[inside] = u * np.cosh(kappa * s) + du * np.sinh(kappa * s) / kappa
            else:
                values[inside] = np.real(solution.sol(x[inside])[0])
        return values

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self._raw(x.reshape(-1)).reshape(x.shape) / self.scale


def _growing_coefficient(propagator: SegmentPropagator, kappa: float) -> float:
    # start from e^{kappa x} on the far left, scaled to 1 at the first point
    u, du = propagator.forward(1j * kappa, np.array([1.0, kappa]))[:, 0]
    # coefficient of e^{kappa x} on the far right, up to a positive factor
    return float(np.real(kappa * u + du) / (kappa * abs(u) + abs(du)))


def _build_bound_state(propagator: SegmentPropagator, kappa: float) -> MixedBoundState:
    k = 1j * kappa
    state = np.array([[1.0], [kappa]], dtype=complex)
    pieces = []
    points = propagator.points
    for index, point in enumerate(points):
        if point in propagator.jumps:
            state = state.copy()
            state[1] = state[1] + propagator.jumps[point] * state[0]
        if index + 1 < points.size:
            start = (float(np.real(state[0, 0])), float(np.real(state[1, 0])))
            state, solution = propagator._segment(k, state, point, points[index + 1], dense=True)
            pieces.append((point, points[index + 1], solution, start))
    right_value = float(np.real(state[0, 0]))
    draft = MixedBoundState(kappa, propagator.left, propagator.right, pieces, right_value)
    inner = integrate_piecewise(lambda t: float(draft(t)) ** 2, draft.left, draft.right, list(points))
    squared = inner + (1.0 + right_value**2) / (2 * kappa)
    return MixedBoundState(kappa, propagator.left, propagator.right, pieces, right_value, float(np.sqrt(squared)))


def mixed_bound_states(spec: PotentialSpec, samples: int | None = None) -> list[MixedBoundState]:
    """Bound states through the ODE path at k = i kappa, deepest first."""
    if spec.is_free:
        return []
    samples = settings_manager.settings.scattering.bound_state_samples if samples is None else samples
    propagator = SegmentPropagator(spec)
    kappas = find_sign_changes(lambda kappa: _growing_coefficient(propagator, kappa), search_bound(spec), samples)
    states = [_build_bound_state(propagator, kappa) for kappa in kappas]
    if states:
        logger.log("SCATTER", f"Found {len(states)} bound states by ODE, energies {[round(s.energy, 8) for s in states]}")
    return states
