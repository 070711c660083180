import numpy as np


def is_uniform(grid: np.ndarray, rtol: float = 1e-9) -> bool:
    if grid.size < 3:
        return True
    steps = np.diff(grid)
    return bool(np.all(np.abs(steps - steps[0]) <= rtol * abs(steps[0])))


def grid_derivative(values: np.ndarray, grid: np.ndarray, axis: int = 0) -> np.ndarray:
    """Fourth-order central differences on uniform grids, second-order np.gradient otherwise."""
    values = np.asarray(values)
    grid = np.asarray(grid, dtype=float)
    if grid.size < 5 or not is_uniform(grid):
        return np.gradient(values, grid, axis=axis, edge_order=2)
    h = grid[1] - grid[0]
    moved = np.moveaxis(values, axis, 0)
    out = np.gradient(moved, h, axis=0, edge_order=2)
    out[2:-2] = (moved[:-4] - 8 * moved[1:-3] + 8 * moved[3:-1] - moved[4:]) / (12 * h)
    return np.moveaxis(out, 0, axis)


def piecewise_derivative(values: np.ndarray, grid: np.ndarray, cuts, axis: int = 0) -> np.ndarray:
    """Differentiate separately on each side of the cut points; stencils never cross a cut.

    A node sitting on a cut belongs to the piece on its right.
    """
    values = np.asarray(values)
    grid = np.asarray(grid, dtype=float)
    edges = sorted({int(np.searchsorted(grid, c, side="left")) for c in cuts if grid[0] < c <= grid[-1]})
    bounds = [0, *edges, grid.size]
    moved = np.moveaxis(values, axis, 0)
    out = np.zeros_like(moved, dtype=np.result_type(moved, float))
    for start, stop in zip(bounds[:-1], bounds[1:]):
        if stop - start >= 3:
            out[start:stop] = grid_derivative(moved[start:stop], grid[start:stop], axis=0)
        elif stop - start == 2:
            out[start:stop] = (moved[start + 1] - moved[start]) / (grid[start + 1] - grid[start])
    return np.moveaxis(out, 0, axis)
