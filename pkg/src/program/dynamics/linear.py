"""Linear propagation e^{-itH} P_c = F_+^* e^{-itk^2} F_+ and the dispersive decay study."""
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel
from scipy import fft

from program.settings.manager import settings_manager
from program.spectral.decomposition import SpectralDecomposition
from program.spectral.grids import GridFunction, SpatialGrid, WavenumberGrid
from program.spectral.transforms import distorted_ft, distorted_ft_adjoint
from program.spectral.waves import NORMALIZATION, build_distorted_waves
from program.utils.logging import logger
from program.waveops.operators import band_limit_warning


@dataclass(frozen=True)
class EvolutionTrace:
    times: np.ndarray
    states: list[GridFunction] = field(repr=False)
    # arrays over diagnostics["t"]: mass, energy, supnorm, left_mass, right_mass
    diagnostics: dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.states) != self.times.size:
            raise ValueError("one state per time is required")
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.states and any(not np.array_equal(state.grid.points, self.states[0].grid.points) for state in self.states):
            raise ValueError("states must share one spatial grid")

    @property
    def final(self) -> GridFunction:
        return self.states[-1]


def well_masses(u: GridFunction) -> tuple[float, float]:
    """Mass on x < 0 and on x > 0; a node at x = 0 is shared equally."""
    x = u.grid.points
    density = np.abs(u.values) ** 2 * u.spacing
    centre = 0.5 * float(np.sum(density[x == 0.0]))
    return float(np.sum(density[x < 0.0])) + centre, float(np.sum(density[x > 0.0])) + centre


def bandwidth(spectrum: GridFunction, threshold: float | None = None) -> float:
    """Largest |k| where |spectrum| exceeds threshold times its maximum."""
    threshold = settings_manager.settings.dynamics.band_threshold if threshold is None else threshold
    significant = np.abs(spectrum.values) > threshold * max(spectrum.sup(), np.finfo(float).tiny)
    if not np.any(significant):
        return 0.0
    return float(np.max(np.abs(spectrum.grid.points[significant])))


def aliasing_warning(spectrum: GridFunction, t: float, x_max: float) -> str | None:
    """Message when the band [-K, K] of spectrum has spread past x_max by time t.

    Under e^{-itk^2} the phase kx - k^2 t is stationary at x = 2kt, so for large t
    wavenumber k sits near x = 2kt and the band fills |x| <= 2Kt around the initial
    support. That radius, not the grid step, decides when mass leaves the window.
    The initial support is not added, so the warning can come late.
    """
    radius = 2.0 * bandwidth(spectrum) * abs(t)
    if radius > x_max:
        message = f"Long-time aliasing: stationary-phase radius {radius:.4g} exceeds x_max={x_max:.4g} at t={t:.4g}"
        logger.warning(message)
        return message
    return None


def evolve_linear(decomp: SpectralDecomposition, f: GridFunction, t: float, include_bound: bool = False) -> GridFunction:
    """e^{-itH} P_c f, plus e^{it kappa_j^2} <psi_j, f> psi_j when include_bound."""
    spectrum = distorted_ft(decomp.table, f)
    band_limit_warning(spectrum)
    aliasing_warning(spectrum, t, decomp.x_grid.x_max)
    phased = spectrum.with_values(np.exp(-1j * t * decomp.k_grid.points**2) * spectrum.values)
    out = distorted_ft_adjoint(decomp.table, phased)
    if include_bound and decomp.kappas.size:
        coefficients = decomp.bound_coefficients(f) * np.exp(1j * t * decomp.kappas**2)
        out = out + f.with_values(decomp.bound_matrix @ coefficients)
    return out


def linear_trace(decomp: SpectralDecomposition, f: GridFunction, times, include_bound: bool = False) -> EvolutionTrace:
    times = np.asarray(times, dtype=float)
    states = [evolve_linear(decomp, f, t, include_bound) for t in times]
    masses = np.array([state.norm() ** 2 for state in states])
    sides = np.array([well_masses(state) for state in states]).reshape(-1, 2)
    diagnostics = {
        "t": times,
        "mass": masses,
        "supnorm": np.array([state.sup() for state in states]),
        "left_mass": sides[:, 0],
        "right_mass": sides[:, 1],
    }
    return EvolutionTrace(times, states, diagnostics)


def _support_grid(decomp: SpectralDecomposition, f: GridFunction) -> tuple[SpatialGrid, slice]:
    """The node range holding f above the truncation tolerance, the potential window and every delta."""
    x = decomp.x_grid.points
    tolerance = settings_manager.settings.spectral.truncation_tolerance
    inside = np.flatnonzero(np.abs(f.values) > tolerance * f.sup())
    lo, hi = int(inside[0]) - 8, int(inside[-1]) + 8
    window = decomp.spec.window
    if window is not None:
        lo = min(lo, int(np.searchsorted(x, window[0])) - 3)
        hi = max(hi, int(np.searchsorted(x, window[1])) + 3)
    lo, hi = max(lo, 0), min(hi, x.size - 1)
    return SpatialGrid(x[lo : hi + 1], decomp.x_grid.jumps), slice(lo, hi + 1)


class DecayReport(BaseModel):
    times: list[float]
    sup_norms: list[float]
    slope: float
    # sup over the times of t^{1/2} ||u(t)||_inf
    scaled_sup: float
    passed: bool


def far_field_sup(decomp: SpectralDecomposition, table, spectrum: np.ndarray, t: float, dx: float) -> float:
    """sup |u(x, t)| outside the potential window from the plane-wave asymptotics of Psi_+.

    u = sum_k g(k) Psi_+(x, k) dk with g = e^{-itk^2} F_+ f. Right of the window
    Psi_+ = (a(k) e^{ikx} + b(k) e^{-ikx}) / sqrt(2 pi) with a = T on k > 0 and 1 on k < 0,
    b = R1(|k|) on k < 0; left of it a = 1 on k > 0 and T(|k|) on k < 0, b = R2 on k > 0.
    Each side is one FFT over the signed midpoint grid.
    """
    k_grid = table.k_grid
    half = k_grid.half
    g = np.exp(-1j * t * k_grid.points**2) * spectrum
    ones = np.ones(half, dtype=complex)
    zeros = np.zeros(half, dtype=complex)
    right_a = np.concatenate([ones, table.T])
    right_b = np.concatenate([table.R1[::-1], zeros])
    left_a = np.concatenate([table.T[::-1], ones])
    left_b = np.concatenate([zeros, table.R2])

    size = fft.next_fast_len(max(k_grid.size, int(np.ceil(2 * np.pi / (k_grid.spacing * dx)))))
    period = 2 * np.pi / k_grid.spacing
    x = np.arange(size) * period / size
    x = np.where(x < period / 2, x, x - period)
    window = decomp.spec.window or (0.0, 0.0)

    def side(a, b):
        # b(k) e^{-ikx} summed over k is b(-k) e^{ikx}, the reversed array
        coefficients = a * g + (b * g)[::-1]
        return np.abs(size * fft.ifft(coefficients, n=size)) * NORMALIZATION * k_grid.spacing

    right = side(right_a, right_b)[x >= window[1]]
    left = side(left_a, left_b)[x <= window[0]]
    return float(max(np.max(right, initial=0.0), np.max(left, initial=0.0)))


def dispersive_decay_study(decomp: SpectralDecomposition, f: GridFunction, t_list=None) -> DecayReport:
    """Fit log ||e^{-itH} P_c f||_inf against log t.

    The wavenumber grid is refined so that its synthesis period holds the ballistic
    radius at the last time; inside the potential window the distorted waves are
    tabulated, outside it far_field_sup supplies the sup.
    """
    settings = settings_manager.settings.dynamics
    times = np.asarray(settings.decay_times if t_list is None else t_list, dtype=float)
    if times.size < 2 or np.any(times <= 0):
        raise ValueError("the decay study needs at least two positive times")
    k_eff = bandwidth(distorted_ft(decomp.table, f))
    radius = 2.0 * k_eff * times.max() + decomp.x_grid.x_max
    dk = np.pi / (4.0 * radius)
    k_grid = WavenumberGrid.midpoint(min(decomp.k_grid.k_max, 1.25 * k_eff + dk), dk)

    grid, nodes = _support_grid(decomp, f)
    table = build_distorted_waves(decomp.spec, k_grid, grid, decomp.table.source)
    spectrum = distorted_ft(table, GridFunction(grid, f.values[nodes])).values
    window = decomp.spec.window
    inner = (grid.points >= window[0]) & (grid.points <= window[1]) if window is not None else np.zeros(grid.size, dtype=bool)

    sups = []
    for t in times:
        phased = np.exp(-1j * t * k_grid.points**2) * spectrum
        inside = np.abs(table.psi[inner] @ (phased * dk)) if np.any(inner) else np.zeros(0)
        sups.append(max(float(np.max(inside, initial=0.0)), far_field_sup(decomp, table, spectrum, t, decomp.x_grid.spacing)))
    sups = np.asarray(sups)
    slope = float(np.polyfit(np.log(times), np.log(sups), 1)[0])
    lo, hi = settings.decay_slope_window
    logger.log("DYNAMICS", f"Dispersive decay slope {slope:.4f} over t in [{times.min():.3g}, {times.max():.3g}]")
    return DecayReport(
        times=times.tolist(),
        sup_norms=sups.tolist(),
        slope=slope,
        scaled_sup=float(np.max(np.sqrt(times) * sups)),
        passed=lo <= slope <= hi,
    )
