"""Uniform grids and sampled functions.

The spatial grid is symmetric with an odd node count, so x = 0 and the parity
reflection are exact. Integrands built from distorted waves have derivative jumps
at the deltas; the quadrature adds the Euler-Maclaurin term h^2/12 [g'] at every
delta node, with the jump [g'] read off as the difference of one-sided derivative
stencils of order up to JUMP_ORDER. Low-order stencils misread the curvature of
oscillating waves as a jump (error ~ h^3 k^4 at second order), so the order is as
high as the nodes up to the grid edge and the neighbouring deltas allow. The
correction is applied symmetrically to both factors of an inner product, so the
weight matrix is real symmetric and analysis/synthesis pairs stay exact adjoints.
"""
from dataclasses import dataclass, field
from functools import cache, cached_property

import numpy as np
from scipy import sparse
from scipy.special import comb

from program.utils.logging import logger

JUMP_ORDER = 8


@cache
def one_sided_derivative(order: int) -> np.ndarray:
    """Coefficients a_j with f'(y+) ~ sum_j a_j f(y + j h) / h, j = 0 .. order."""
    j = np.arange(1, order + 1)
    tail = (-1.0) ** (j + 1) * comb(order, j) / j
    return np.concatenate([[-np.sum(1.0 / j)], tail])


def jump_stencil(order: int) -> np.ndarray:
    """f'(y+) - f'(y-) from f(y - order h) ... f(y + order h), times h."""
    a = one_sided_derivative(order)
    return np.concatenate([a[:0:-1], [2.0 * a[0]], a[1:]])


@dataclass(frozen=True)
class SpatialGrid:
    points: np.ndarray
    jumps: tuple[float, ...] = ()

    @classmethod
    def symmetric(cls, x_max: float, dx: float, jumps=()) -> "SpatialGrid":
        half = int(round(x_max / dx))
        points = dx * np.arange(-half, half + 1)
        return cls(points, tuple(float(y) for y in np.atleast_1d(jumps)))

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def spacing(self) -> float:
        return float(self.points[1] - self.points[0])

    @property
    def x_max(self) -> float:
        return float(self.points[-1])

    def node_of(self, y: float) -> int | None:
        """Index of the node at y, or None when y is not a node."""
        index = int(np.rint((y - self.points[0]) / self.spacing))
        if 0 <= index < self.size and abs(self.points[index] - y) <= 1e-9 * max(1.0, abs(y)):
            return index
        return None

    @cached_property
    def corrected_nodes(self) -> list[tuple[int, int]]:
        """(node index, stencil order) for every delta that gets a jump correction."""
        indices = sorted(index for y in self.jumps if (index := self.node_of(y)) is not None)
        if len(indices) < len(self.jumps):
            logger.warning("Some deltas are not grid nodes; quadrature near them is second order")
        nodes = []
        for position, index in enumerate(indices):
            left = index - indices[position - 1] if position > 0 else index
            right = indices[position + 1] - index if position + 1 < len(indices) else self.size - 1 - index
            # one-sided stencils stay on their own side of the neighbouring delta
            order = min(JUMP_ORDER, left, right) // 2 * 2
            if order < 2:
                logger.warning(f"Delta at {self.points[index]} has no room for a jump stencil; skipping its correction")
                continue
            if order < JUMP_ORDER:
                logger.debug(f"Jump stencil at {self.points[index]} reduced to order {order}")
            nodes.append((index, order))
        return nodes

    @cached_property
    def weights(self) -> sparse.csr_matrix:
        h = self.spacing
        rows, cols, data = [np.arange(self.size)], [np.arange(self.size)], [np.full(self.size, h)]
        for index, order in self.corrected_nodes:
            # h^2/12 (e d^T + d e^T) with d the jump stencil at this node
            coefficients = (h / 12.0) * jump_stencil(order)
            offsets = np.arange(-order, order + 1)
            rows += [np.full(offsets.size, index), index + offsets]
            cols += [index + offsets, np.full(offsets.size, index)]
            data += [coefficients, coefficients]
        return sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(self.size, self.size)
        )

    def weigh(self, values: np.ndarray) -> np.ndarray:
        """W @ values, so that sum(conj(g) * weigh(f)) approximates int conj(g) f."""
        return self.weights @ values

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        return complex(np.vdot(f, self.weigh(g)))

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(max(np.real(self.inner(f, f)), 0.0)))

    def reflect(self, values: np.ndarray) -> np.ndarray:
        return values[::-1]


@dataclass(frozen=True)
class WavenumberGrid:
    """Signed midpoint grid k_j = (j + 1/2) dk, j = -M .. M-1; k = 0 is never a node."""

    points: np.ndarray

    @classmethod
    def midpoint(cls, k_max: float, dk: float) -> "WavenumberGrid":
        half = max(int(round(k_max / dk)), 1)
        return cls((np.arange(-half, half) + 0.5) * dk)

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def spacing(self) -> float:
        return float(self.points[1] - self.points[0])

    @property
    def half(self) -> int:
        return self.size // 2

    @property
    def positive(self) -> np.ndarray:
        return self.points[self.half :]

    @property
    def k_max(self) -> float:
        return float(self.points[-1] + 0.5 * self.spacing)

    def weigh(self, values: np.ndarray) -> np.ndarray:
        return self.spacing * values

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        return complex(np.vdot(f, g) * self.spacing)

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(np.sum(np.abs(f) ** 2) * self.spacing))


Grid = SpatialGrid | WavenumberGrid


@dataclass(frozen=True)
class GridFunction:
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.grid.points.shape:
            raise ValueError(f"values of shape {values.shape} do not match a grid of {self.grid.size} nodes")
        points = self.grid.points
        steps = np.diff(points)
        if steps.size and not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("GridFunction needs a uniform grid")
        object.__setattr__(self, "values", values)

    @classmethod
    def sample(cls, grid: Grid, fn) -> "GridFunction":
        return cls(grid, fn(grid.points))

    @property
    def x_grid(self) -> np.ndarray:
        return self.grid.points

    @property
    def spacing(self) -> float:
        return self.grid.spacing

    def norm(self) -> float:
        return self.grid.norm(self.values)

    def inner(self, other: "GridFunction") -> complex:
        """<self, other>, antilinear in self."""
        return self.grid.inner(self.values, other.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.grid, values)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar) -> "GridFunction":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def relative_distance(self, other: "GridFunction") -> float:
        """||self - other|| / ||other||."""
        scale = other.norm()
        return (self - other).norm() / scale if scale > 0 else (self - other).norm()
