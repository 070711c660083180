"""Jost solutions from the Volterra equation

    m1(x, k) = 1 + int_x^inf D_k(y - x) V(y) m1(y, k) dy,   D_k(s) = (e^{2iks} - 1) / (2ik),

solved by one backward sweep. Splitting D_k gives

    m1(x) = 1 + (e^{-2ikx} C1(x) - C0(x)) / (2ik),
    C1(x) = int_x^inf e^{2iky} V m1 dy,   C0(x) = int_x^inf V m1 dy,

so each node only needs the running sums of the nodes to its right. Deltas enter
as point weights c_j; the regular part by one-sided trapezoid weights. m2 is the
m1 of the reflected potential read at -x.
"""
from dataclasses import dataclass, field

import numpy as np

from program.potential.models import PotentialSpec
from program.settings.manager import settings_manager
from program.utils.logging import logger
from program.utils.parallel import map_chunks

MERGE_TOLERANCE = 1e-10


class NonConvergenceError(Exception):
    """Fixed-point iteration hit the iteration cap before reaching the residual target."""


class GridTooCoarseError(Exception):
    """The Richardson error estimate exceeds the configured tolerance."""


def dk_kernel(k, x):
    """D_k(x) = int_0^x e^{2iky} dy, equal to x at k = 0."""
    k = np.asarray(k, dtype=complex)
    x = np.asarray(x, dtype=float)
    safe = np.where(k == 0, 1.0, k)
    return np.where(k == 0, x + 0j, (np.exp(2j * safe * x) - 1) / (2j * safe))


@dataclass(frozen=True)
class QuadratureNodes:
    z: np.ndarray
    weights: np.ndarray
    # V(z+) for the endpoint correction of the trapezoid rule
    v_right: np.ndarray
    steps: np.ndarray
    is_delta: np.ndarray
    output_index: np.ndarray


def _merge(points: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    points = np.sort(points)
    keep = np.concatenate([[True], np.diff(points) > MERGE_TOLERANCE])
    merged = points[keep]
    for anchor in anchors:
        merged[np.argmin(np.abs(merged - anchor))] = anchor
    return merged


def quadrature_nodes(spec: PotentialSpec, x_grid: np.ndarray, quad_dx: float) -> QuadratureNodes:
    """Union of the output grid, a fine grid on the regular window and the delta locations."""
    x_grid = np.asarray(x_grid, dtype=float)
    parts = [x_grid, spec.locations]
    window = spec.regular.window
    if window is not None:
        lo, hi = window
        count = max(int(np.ceil((hi - lo) / quad_dx)), 1)
        parts.append(np.linspace(lo, hi, count + 1))
        parts.append(np.array([p for p in spec.regular.breakpoints if lo <= p <= hi], dtype=float))
    z = _merge(np.concatenate(parts), spec.locations)

    steps = np.append(np.diff(z), 0.0)
    weights = np.zeros_like(z)
    v_right = np.zeros_like(z)
    if not spec.regular.is_zero:
        nudge = 1e-12 * np.maximum(1.0, np.abs(z))
        v_left = spec.regular(z - nudge)
        v_right = spec.regular(z + nudge)
        left_steps = np.insert(np.diff(z), 0, 0.0)
        weights = 0.5 * left_steps * v_left + 0.5 * steps * v_right

    is_delta = np.zeros(z.shape, dtype=bool)
    for delta in spec.deltas:
        index = int(np.argmin(np.abs(z - delta.y)))
        weights[index] += delta.c
        is_delta[index] = True

    output_index = np.array([int(np.argmin(np.abs(z - x))) for x in x_grid], dtype=int)
    return QuadratureNodes(z, weights, v_right, steps, is_delta, output_index)


@dataclass(frozen=True)
class SweepResult:
    m: np.ndarray
    dm: np.ndarray
    # sum_{l>i} W_l: the discrete int_x^inf V, i.e. B1(x, 0+)
    tail: np.ndarray
    S0: np.ndarray
    S1: np.ndarray


def backward_sweep(nodes: QuadratureNodes, k: np.ndarray) -> SweepResult:
    """Direct backward substitution for every k at once; outputs on nodes.output_index."""
    k = np.asarray(k, dtype=float)
    z, weights = nodes.z, nodes.weights
    # several output points may share a node
    slots: dict[int, list[int]] = {}
    for slot, index in enumerate(nodes.output_index):
        slots.setdefault(int(index), []).append(slot)

    m_out = np.ones((nodes.output_index.size, k.size), dtype=complex)
    dm_out = np.zeros((nodes.output_index.size, k.size), dtype=complex)
    tail_out = np.zeros(nodes.output_index.size)
    C1 = np.zeros(k.size, dtype=complex)
    C0 = np.zeros(k.size, dtype=complex)
    tail = 0.0
    two_ik = 2j * k
    correction = 1.0 - nodes.steps**2 * nodes.v_right / 12.0

    for i in range(z.size - 1, -1, -1):
        inverse_phase = np.exp(-2j * k * z[i])
        m = (1.0 + (inverse_phase * C1 - C0) / two_ik) / correction[i]
        if i in slots:
            for slot in slots[i]:
                m_out[slot] = m
                dm_out[slot] = -inverse_phase * C1
                tail_out[slot] = tail
        if weights[i] != 0.0:
            weighted = weights[i] * m
            C1 = C1 + weighted / inverse_phase
            C0 = C0 + weighted
            tail += weights[i]
    return SweepResult(m_out, dm_out, tail_out, C0, C1)


@dataclass(frozen=True)
class JostSolution:
    x_grid: np.ndarray
    k_grid: np.ndarray
    m1: np.ndarray | None = None
    m2: np.ndarray | None = None
    dm1: np.ndarray | None = None
    dm2: np.ndarray | None = None
    # discrete int_x^inf V and int_{-inf}^x V, the kernels' values at y = 0+
    tail1: np.ndarray | None = None
    tail2: np.ndarray | None = None
    inverse_T: np.ndarray | None = None
    R2_over_T: np.ndarray | None = None
    R1_over_T: np.ndarray | None = None
    which: str = "m1"
    spec: PotentialSpec | None = field(default=None, repr=False)
    diagnostics: dict = field(default_factory=dict)

    @property
    def T(self) -> np.ndarray:
        return 1.0 / self.inverse_T

    @property
    def R1(self) -> np.ndarray:
        return self.R1_over_T * self.T

    @property
    def R2(self) -> np.ndarray:
        return self.R2_over_T * self.T

    def f1(self) -> np.ndarray:
        return np.exp(1j * np.outer(self.x_grid, self.k_grid)) * self.m1

    def f2(self) -> np.ndarray:
        return np.exp(-1j * np.outer(self.x_grid, self.k_grid)) * self.m2

    def e_plus(self) -> np.ndarray:
        """e_+(x, k) = T f1(x, k)."""
        return self.T[None, :] * self.f1()

    def e_minus(self) -> np.ndarray:
        """e_-(x, k) = T f2(x, k)."""
        return self.T[None, :] * self.f2()

    def wronskian(self) -> np.ndarray:
        """W[f1, f2](x, k); constant in x and equal to -2ik / T away from the deltas."""
        return -2j * self.k_grid[None, :] * self.m1 * self.m2 + self.m1 * self.dm2 - self.dm1 * self.m2

    def merged(self, other: "JostSolution") -> "JostSolution":
        return JostSolution(
            self.x_grid,
            self.k_grid,
            m1=self.m1 if self.m1 is not None else other.m1,
            m2=self.m2 if self.m2 is not None else other.m2,
            dm1=self.dm1 if self.dm1 is not None else other.dm1,
            dm2=self.dm2 if self.dm2 is not None else other.dm2,
            tail1=self.tail1 if self.tail1 is not None else other.tail1,
            tail2=self.tail2 if self.tail2 is not None else other.tail2,
            inverse_T=self.inverse_T if self.inverse_T is not None else other.inverse_T,
            R2_over_T=self.R2_over_T if self.R2_over_T is not None else other.R2_over_T,
            R1_over_T=self.R1_over_T if self.R1_over_T is not None else other.R1_over_T,
            which="both",
            spec=self.spec if self.spec is not None else other.spec,
            diagnostics={**other.diagnostics, **self.diagnostics},
        )


def _sweep(spec: PotentialSpec, k_grid: np.ndarray, x_grid: np.ndarray, quad_dx: float) -> SweepResult:
    nodes = quadrature_nodes(spec, x_grid, quad_dx)
    workers = settings_manager.settings.scattering.max_workers
    if workers <= 1:
        return backward_sweep(nodes, k_grid)
    count = nodes.output_index.size

    def run(chunk):
        # pack per-k columns so chunks concatenate along k
        result = backward_sweep(nodes, chunk)
        return np.column_stack([result.m.T, result.dm.T, result.S0, result.S1])

    packed = map_chunks(run, k_grid, workers)
    tail = backward_sweep(nodes, k_grid[:1]).tail
    return SweepResult(packed[:, :count].T, packed[:, count : 2 * count].T, tail, packed[:, -2], packed[:, -1])


def _richardson(spec, k_grid, x_grid, quad_dx, fine: SweepResult, tolerance: float) -> float:
    if spec.is_pure_delta:
        return 0.0
    coarse = _sweep(spec, k_grid, x_grid, 2 * quad_dx)
    estimate = float(np.max(np.abs(fine.m - coarse.m)) / 3.0) if fine.m.size else 0.0
    if estimate > tolerance:
        raise GridTooCoarseError(f"Richardson estimate {estimate:.2e} exceeds {tolerance:.2e} at quad_dx={quad_dx}")
    return estimate


def solve_m1(
    spec: PotentialSpec,
    k_grid,
    x_grid,
    quad_dx: float | None = None,
    check: bool = True,
) -> JostSolution:
    """m1 on x_grid x k_grid (k real, nonzero) by backward substitution."""
    settings = settings_manager.settings.jost
    quad_dx = settings.quad_dx if quad_dx is None else quad_dx
    k_grid = np.asarray(k_grid, dtype=float)
    x_grid = np.asarray(x_grid, dtype=float)
    if np.any(k_grid == 0):
        raise ValueError("k = 0 must be excluded from the Jost grid")

    result = _sweep(spec, k_grid, x_grid, quad_dx)
    estimate = _richardson(spec, k_grid, x_grid, quad_dx, result, settings.richardson_tolerance) if check else None
    two_ik = 2j * k_grid
    logger.log("JOST", f"m1 on {x_grid.size}x{k_grid.size} grid, Richardson estimate {estimate}")
    return JostSolution(
        x_grid,
        k_grid,
        m1=result.m,
        dm1=result.dm,
        tail1=result.tail,
        inverse_T=1.0 - result.S0 / two_ik,
        R2_over_T=result.S1 / two_ik,
        which="m1",
        spec=spec,
        diagnostics={"richardson_m1": estimate} if estimate is not None else {},
    )


def solve_m2(
    spec: PotentialSpec,
    k_grid,
    x_grid,
    quad_dx: float | None = None,
    check: bool = True,
) -> JostSolution:
    """m2(x, k) = m1 of the reflected potential at -x."""
    settings = settings_manager.settings.jost
    quad_dx = settings.quad_dx if quad_dx is None else quad_dx
    k_grid = np.asarray(k_grid, dtype=float)
    x_grid = np.asarray(x_grid, dtype=float)
    reflected = spec.reflected()
    result = _sweep(reflected, k_grid, -x_grid, quad_dx)
    estimate = _richardson(reflected, k_grid, -x_grid, quad_dx, result, settings.richardson_tolerance) if check else None
    two_ik = 2j * k_grid
    logger.log("JOST", f"m2 on {x_grid.size}x{k_grid.size} grid, Richardson estimate {estimate}")
    return JostSolution(
        x_grid,
        k_grid,
        m2=result.m,
        dm2=-result.dm,
        tail2=result.tail,
        inverse_T=1.0 - result.S0 / two_ik,
        R1_over_T=result.S1 / two_ik,
        which="m2",
        spec=spec,
        diagnostics={"richardson_m2": estimate} if estimate is not None else {},
    )


def solve_jost(spec: PotentialSpec, k_grid, x_grid, quad_dx: float | None = None, check: bool = True) -> JostSolution:
    """Both Jost functions; the pair carries T, R1 and R2."""
    return solve_m1(spec, k_grid, x_grid, quad_dx, check).merged(solve_m2(spec, k_grid, x_grid, quad_dx, check))


def fixed_point_m1(
    spec: PotentialSpec,
    k_grid,
    x_grid,
    quad_dx: float | None = None,
    tolerance: float | None = None,
    max_iter: int | None = None,
) -> tuple[np.ndarray, int]:
    """Picard iteration of the same discretisation, as a cross-check of the sweep."""
    settings = settings_manager.settings.jost
    quad_dx = settings.quad_dx if quad_dx is None else quad_dx
    tolerance = settings.fixed_point_tolerance if tolerance is None else tolerance
    max_iter = settings.fixed_point_max_iter if max_iter is None else max_iter
    k = np.asarray(k_grid, dtype=float)
    nodes = quadrature_nodes(spec, np.asarray(x_grid, dtype=float), quad_dx)
    phase = np.exp(2j * np.outer(nodes.z, k))
    W = nodes.weights[:, None]
    m = np.ones((nodes.z.size, k.size), dtype=complex)
    for iteration in range(1, max_iter + 1):
        weighted = W * m
        # strictly-right running sums
        C1 = np.cumsum((weighted * phase)[::-1], axis=0)[::-1] - weighted * phase
        C0 = np.cumsum(weighted[::-1], axis=0)[::-1] - weighted
        updated = 1.0 + (C1 / phase - C0) / (2j * k) + (nodes.steps**2 * nodes.v_right / 12.0)[:, None] * m
        residual = float(np.max(np.abs(updated - m)))
        m = updated
        if residual < tolerance:
            logger.log("JOST", f"Fixed point converged in {iteration} iterations")
            return m[nodes.output_index], iteration
    raise NonConvergenceError(f"fixed point residual {residual:.2e} after {max_iter} iterations")
