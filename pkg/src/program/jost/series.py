"""B1 as the series sum_n K_n with

    K_0(x, y) = int_{x+y}^inf V(t) dt,
    K_{n+1}(x, y) = int_0^y int_{x+y-z}^inf V(t) K_n(t, z) dt dz,

evaluated by trapezoid sums on one lattice t_p = t_0 + p h, z_m = m h shared by both
variables, so x + y - z always lands on a lattice point. Deltas enter as point
masses; on a jump line the half value is used. Richardson extrapolation against the
lattice of step h/2 removes the h^2 term.
"""
from dataclasses import dataclass, field

import numpy as np

from program.potential.models import PotentialSpec
from program.settings.manager import settings_manager
from program.utils.logging import logger

LATTICE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class KnSeries:
    x_grid: np.ndarray
    y_grid: np.ndarray
    terms: list[np.ndarray] = field(repr=False)
    h: float = 0.0
    richardson: bool = False

    @property
    def partial_sums(self) -> list[np.ndarray]:
        return list(np.cumsum(np.stack(self.terms), axis=0))

    @property
    def total(self) -> np.ndarray:
        return np.sum(self.terms, axis=0)

    @property
    def tail_estimate(self) -> float:
        """sup |K_{n_max}|, the size of the last term kept."""
        return float(np.max(np.abs(self.terms[-1]))) if self.terms[-1].size else 0.0


@dataclass(frozen=True)
class _Lattice:
    t: np.ndarray
    h: float
    columns: int
    v_plus: np.ndarray
    v_minus: np.ndarray
    delta_index: np.ndarray
    strengths: np.ndarray


def _on_lattice(points: np.ndarray, origin: float, h: float, what: str) -> np.ndarray:
    steps = (np.asarray(points, dtype=float) - origin) / h
    index = np.rint(steps).astype(int)
    if np.any(np.abs(steps - index) > LATTICE_TOLERANCE * max(1.0, float(np.max(np.abs(steps), initial=0.0)))):
        raise ValueError(f"{what} must lie on the lattice {origin} + p * {h}")
    return index


def _lattice(spec: PotentialSpec, x_grid: np.ndarray, y_max: float, h: float) -> _Lattice:
    lo, hi = float(np.min(x_grid)), float(np.max(x_grid))
    if spec.window is not None:
        lo, hi = min(lo, spec.window[0]), max(hi, spec.window[1])
    rows = int(np.rint((hi - lo) / h)) + 1
    t = lo + h * np.arange(rows)
    columns = int(np.rint(y_max / h)) + 1
    v_plus = np.zeros(rows)
    v_minus = np.zeros(rows)
    if not spec.regular.is_zero:
        nudge = 1e-12 * np.maximum(1.0, np.abs(t))
        v_plus = spec.regular(t + nudge)
        v_minus = spec.regular(t - nudge)
        window = spec.regular.window
        _on_lattice(np.array([p for p in spec.regular.breakpoints if window[0] <= p <= window[1]]), lo, h, "breakpoints")
    return _Lattice(t, h, columns, v_plus, v_minus, _on_lattice(spec.locations, lo, h, "delta locations"), spec.strengths)


def _signed_tail(lattice: _Lattice) -> np.ndarray:
    """int_{t_p}^inf V on the lattice, half of a delta sitting on t_p."""
    h = lattice.h
    segments = 0.5 * h * (lattice.v_plus[:-1] + lattice.v_minus[1:])
    tail = np.zeros(lattice.t.size)
    tail[:-1] = np.cumsum(segments[::-1])[::-1]
    for index, c in zip(lattice.delta_index, lattice.strengths):
        tail[:index] += c
        tail[index] += 0.5 * c
    return tail


def _first_term(lattice: _Lattice) -> np.ndarray:
    tail = _signed_tail(lattice)
    rows = lattice.t.size
    index = np.arange(rows)[:, None] + np.arange(lattice.columns)[None, :]
    padded = np.concatenate([tail, np.zeros(lattice.columns)])
    return padded[index]


def _inner(lattice: _Lattice, K: np.ndarray, first: bool) -> np.ndarray:
    """Q(s_p, z_m) = int_{s_p}^inf V(t) K(t, z_m) dt."""
    h = lattice.h
    segments = 0.5 * h * (lattice.v_plus[:-1, None] * K[:-1] + lattice.v_minus[1:, None] * K[1:])
    Q = np.zeros_like(K)
    Q[:-1] = np.cumsum(segments[::-1], axis=0)[::-1]
    for index, c in zip(lattice.delta_index, lattice.strengths):
        weight = c * K[index].copy()
        if first:
            # K_0(y_j, 0+) leaves out the delta at y_j itself
            weight[0] -= 0.5 * c * c
        Q[:index] += weight
        Q[index] += 0.5 * weight
    return Q


def _next_term(lattice: _Lattice, Q: np.ndarray) -> np.ndarray:
    """K(t_p, z_m) = int_0^{z_m} Q(t_p + z_m - z, z) dz by the trapezoid rule."""
    rows, columns = Q.shape
    h = lattice.h
    padded = np.concatenate([Q, np.zeros((columns, columns))], axis=0)
    rows_index = np.arange(rows)[:, None]
    out = np.zeros_like(Q)
    for m in range(1, columns):
        l = np.arange(m + 1)
        weights = np.full(m + 1, h)
        weights[[0, -1]] = 0.5 * h
        out[:, m] = padded[rows_index + m - l[None, :], l[None, :]] @ weights
    return out


def _series(spec: PotentialSpec, x_grid: np.ndarray, y_grid: np.ndarray, n_max: int, h: float) -> list[np.ndarray]:
    lattice = _lattice(spec, x_grid, float(np.max(y_grid)), h)
    rows = _on_lattice(x_grid, lattice.t[0], h, "x_grid")
    columns = _on_lattice(y_grid, 0.0, h, "y_grid")
    K = _first_term(lattice)
    terms = [K[np.ix_(rows, columns)]]
    for n in range(n_max):
        K = _next_term(lattice, _inner(lattice, K, first=n == 0))
        terms.append(K[np.ix_(rows, columns)])
    return terms


def kn_series(
    spec: PotentialSpec,
    x_grid,
    y_grid,
    n_max: int | None = None,
    h: float | None = None,
    richardson: bool = True,
) -> KnSeries:
    """K_0 ... K_{n_max} on x_grid x y_grid; both grids must sit on the lattice of step h."""
    settings = settings_manager.settings.jost
    n_max = settings.kn_terms if n_max is None else n_max
    x_grid = np.asarray(x_grid, dtype=float)
    y_grid = np.asarray(y_grid, dtype=float)
    if h is None:
        h = float(np.min(np.diff(y_grid))) if y_grid.size > 1 else settings.quad_dx
    if np.any(y_grid < 0):
        raise ValueError("y_grid must be non-negative")

    terms = _series(spec, x_grid, y_grid, n_max, h)
    # step functions of pure deltas are exact on the lattice
    if richardson and not spec.is_pure_delta:
        fine = _series(spec, x_grid, y_grid, n_max, h / 2)
        terms = [(4 * f - c) / 3 for f, c in zip(fine, terms)]
    series = KnSeries(x_grid, y_grid, terms, h, richardson and not spec.is_pure_delta)
    logger.log("JOST", f"K_n series with {n_max} terms at h={h}, last term sup {series.tail_estimate:.2e}")
    return series
