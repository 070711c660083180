"""Integral kernel operators S_A phi(x) = int A(x, y) phi(y) dy and their Young constants."""
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel

from program.jost.kernel import B1Kernel
from program.potential.models import PotentialSpec
from program.potential.norms import weighted_l1_norm
from program.utils.derivatives import is_uniform
from program.utils.logging import logger


@dataclass(frozen=True)
class KernelOperator:
    """A(x, y) sampled on x_grid x y_grid; rows follow x."""

    x_grid: np.ndarray
    y_grid: np.ndarray
    values: np.ndarray = field(repr=False)
    name: str = "A"

    def __post_init__(self):
        if self.values.shape != (self.x_grid.size, self.y_grid.size):
            raise ValueError(f"kernel of shape {self.values.shape} does not match the grids")

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0]) if self.x_grid.size > 1 else 1.0

    @property
    def dy(self) -> float:
        return float(self.y_grid[1] - self.y_grid[0]) if self.y_grid.size > 1 else 1.0

    def apply(self, phi: np.ndarray) -> np.ndarray:
        """Riemann sum of A(x, y) phi(y) dy for phi sampled on y_grid."""
        phi = np.asarray(phi)
        if phi.shape != self.y_grid.shape:
            raise ValueError("phi must be sampled on the kernel's y grid")
        return self.values @ phi * self.dy

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)


def young_constant(op: KernelOperator) -> float:
    """sup_x int |A| dy + sup_y int |A| dx on the sampled grid."""
    if op.values.size == 0:
        return 0.0
    magnitude = np.abs(op.values)
    rows = float(np.max(magnitude.sum(axis=1) * op.dy))
    columns = float(np.max(magnitude.sum(axis=0) * op.dx))
    return rows + columns


def _default_y_grid(x_grid: np.ndarray, extent: float) -> np.ndarray:
    step = float(x_grid[1] - x_grid[0])
    count = int(np.ceil(extent / step))
    lo, hi = x_grid[0] - count * step, x_grid[-1] + count * step
    return np.linspace(lo, hi, x_grid.size + 2 * count)


def sj_kernel(b1: B1Kernel, which: int = 1, y_grid=None, derivative: bool = False) -> KernelOperator:
    """R_1(x, y) = 1_{y >= x} B1(x, (y - x)/2) on b1.x_grid.

    For which=2, b1 must be the kernel of the reflected potential; then
    R_2(x, y) = 1_{y <= x} B2(x, (x - y)/2) with B2(x, s) = B1_reflected(-x, s).
    derivative=True samples the d/dx B companion instead of B.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    if b1.x_grid.size < 2 or not is_uniform(b1.x_grid):
        raise ValueError("sj_kernel needs a uniform x grid")
    source = b1.dx_values if derivative else b1.values
    if which == 1:
        x_grid, rows = b1.x_grid, source
    else:
        x_grid, rows = -b1.x_grid[::-1], source[::-1]
        if derivative:
            rows = -rows
    y_grid = _default_y_grid(x_grid, 2.0 * b1.y_grid[-1]) if y_grid is None else np.asarray(y_grid, dtype=float)

    values = np.zeros((x_grid.size, y_grid.size))
    for i, x in enumerate(x_grid):
        s = (y_grid - x) / 2.0 if which == 1 else (x - y_grid) / 2.0
        inside = s >= 0.0
        values[i, inside] = np.interp(s[inside], b1.y_grid, rows[i], right=0.0)
    name = f"{'dS' if derivative else 'S'}{which}"
    logger.log("WAVEOP", f"{name} kernel on {x_grid.size}x{y_grid.size} grid")
    return KernelOperator(x_grid, y_grid, values, name=name)


class YoungChainReport(BaseModel):
    constant: float
    weighted_norm: float
    # constant / weighted_norm, the empirical K in C <= K ||V_reg||
    ratio: float | None


def young_chain(spec: PotentialSpec, op: KernelOperator, gamma: float | None = None) -> YoungChainReport:
    """Young constant of op against the weighted L1 norm of the regular part."""
    constant = young_constant(op)
    norm = weighted_l1_norm(spec, gamma)
    ratio = constant / norm if norm > 0 else None
    logger.log("WAVEOP", f"C({op.name}) = {constant:.4e}, ||V_reg|| = {norm:.4e}, ratio {ratio}")
    return YoungChainReport(constant=constant, weighted_norm=norm, ratio=ratio)
