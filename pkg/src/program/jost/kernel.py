"""The kernel B1 of m1(x, k) = 1 + int_0^inf B1(x, y) e^{2iky} dy.

B1(x, .) is recovered from m1(x, .) on the midpoint grid k_j = (j + 1/2) dk by one
FFT per x. m1 - 1 decays only like B1(x, 0+) / (-2ik), so the edge term
B1(x, 0+) e^{-y}, whose transform is B1(x, 0+) / (1 - 2ik), is subtracted first and
added back in y. B1(x, 0+) is the tail int_x^inf V carried by the Volterra sweep.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import fft

from program.jost.volterra import JostSolution, solve_m1
from program.potential.models import PotentialSpec
from program.settings.manager import settings_manager
from program.utils.logging import logger


@dataclass(frozen=True)
class B1Kernel:
    x_grid: np.ndarray
    y_grid: np.ndarray
    values: np.ndarray
    dx_values: np.ndarray
    # B1(x, 0+) per x, the subtracted edge value
    edge: np.ndarray = field(repr=False, default=None)
    diagnostics: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def dy(self) -> float:
        return float(self.y_grid[1] - self.y_grid[0]) if self.y_grid.size > 1 else 0.0

    def at(self, x: float, y: float) -> float:
        """Bilinear interpolation of B1 at one point; 0 outside the sampled y range."""
        if y < 0 or y > self.y_grid[-1]:
            return 0.0
        column = np.array([np.interp(y, self.y_grid, row) for row in self.values])
        return float(np.interp(x, self.x_grid, column))


def b1_k_grid(k_max: float | None = None, dk: float | None = None) -> np.ndarray:
    """Midpoint grid (j + 1/2) dk, j < round(k_max / dk); dk defaults to pi / (2 y_max)."""
    settings = settings_manager.settings.jost
    k_max = settings.b1_k_max if k_max is None else k_max
    dk = np.pi / (2 * settings.b1_y_max) if dk is None else dk
    count = max(int(round(k_max / dk)), 1)
    return (np.arange(count) + 0.5) * dk


def _midpoint_spacing(k_grid: np.ndarray) -> float:
    dk = 2 * k_grid[0]
    expected = (np.arange(k_grid.size) + 0.5) * dk
    if k_grid.size < 2 or not np.allclose(k_grid, expected, rtol=1e-10, atol=0.0):
        raise ValueError("B1 inversion needs the midpoint grid k_j = (j + 1/2) dk, see b1_k_grid")
    return float(dk)


def _invert(residual: np.ndarray, dk: float) -> tuple[np.ndarray, float]:
    """Midpoint-rule inverse of int_0^inf b(y) e^{2iky} dy for each row.

    Returns b on y_n = n pi / (2 K), n < M, and the largest value the same sum
    assigns to y < 0, where b must vanish.
    """
    count = residual.shape[-1]
    spectrum = fft.fft(residual, n=2 * count, axis=-1)
    n = np.arange(2 * count)
    values = (2 * dk / np.pi) * np.real(np.exp(-1j * np.pi * n / (2 * count)) * spectrum)
    return values[..., :count], float(np.max(np.abs(values[..., count:]))) if values.size else 0.0


def b1_from_m1(jost: JostSolution) -> B1Kernel:
    """B1 and its x-derivative from m1 and d_x m1 on the midpoint k grid."""
    if jost.m1 is None or jost.tail1 is None:
        raise ValueError("B1 needs a JostSolution carrying m1")
    settings = settings_manager.settings.jost
    k = jost.k_grid
    dk = _midpoint_spacing(k)
    count = k.size
    y_grid = np.arange(count) * np.pi / (2 * count * dk)
    edge = np.asarray(jost.tail1, dtype=float)
    # d/dx of int_x^inf V at y = 0+, one-sided value of the regular part
    spec = jost.spec
    x = jost.x_grid
    dx_edge = -spec.regular(x + 1e-12 * np.maximum(1.0, np.abs(x))) if spec is not None else np.zeros_like(x)

    profile = 1.0 / (1.0 - 2j * k)
    residual = jost.m1 - 1.0 - edge[:, None] * profile[None, :]
    dx_residual = jost.dm1 - dx_edge[:, None] * profile[None, :]

    values, leak = _invert(residual, dk)
    dx_values, dx_leak = _invert(dx_residual, dk)
    decay = np.exp(-y_grid)[None, :]
    values = values + edge[:, None] * decay
    dx_values = dx_values + dx_edge[:, None] * decay

    warnings = []
    top = float(np.max(np.abs(residual[:, -1]))) if residual.size else 0.0
    if top > settings.aliasing_tolerance:
        message = f"B1 aliasing: residual {top:.2e} at k_max={k[-1]:.4g} exceeds {settings.aliasing_tolerance:.0e}"
        logger.warning(message)
        warnings.append(message)

    logger.log("JOST", f"B1 on {x.size}x{y_grid.size} grid, dy={y_grid[1] if count > 1 else 0:.3e}, causality leak {leak:.2e}")
    return B1Kernel(
        x,
        y_grid,
        values,
        dx_values,
        edge=edge,
        diagnostics={
            "k_max_residual": top,
            "causality_residual": leak,
            "dx_causality_residual": dx_leak,
        },
        warnings=warnings,
    )


def synthesize_m1(b1: B1Kernel, k) -> np.ndarray:
    """1 + int_0^inf B1(x, y) e^{2iky} dy on b1.x_grid x k.

    Uses the same edge split and midpoint pairing as the inversion, so on the
    inversion grid this undoes b1_from_m1 up to the causality residual.
    """
    k = np.asarray(k, dtype=float)
    edge = b1.edge if b1.edge is not None else b1.values[:, 0]
    residual = b1.values - edge[:, None] * np.exp(-b1.y_grid)[None, :]
    phases = np.exp(2j * np.outer(b1.y_grid, k))
    return 1.0 + edge[:, None] / (1.0 - 2j * k)[None, :] + b1.dy * residual @ phases


def b1_kernel(
    spec: PotentialSpec,
    x_grid,
    k_max: float | None = None,
    dk: float | None = None,
    quad_dx: float | None = None,
    check: bool = True,
) -> B1Kernel:
    """Solve m1 on the midpoint grid and invert it."""
    k_grid = b1_k_grid(k_max, dk)
    return b1_from_m1(solve_m1(spec, k_grid, x_grid, quad_dx=quad_dx, check=check))
