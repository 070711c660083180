"""Discrete W^{1,p} norms and the empirical ratio ||W_+ f|| / ||f|| over a seeded family."""
import numpy as np
from pydantic import BaseModel
from scipy import special

from program.settings.manager import settings_manager
from program.spectral.decomposition import SpectralDecomposition
from program.spectral.grids import GridFunction, SpatialGrid
from program.utils.derivatives import piecewise_derivative
from program.utils.logging import logger
from program.waveops.harmonic import apply_multiplier, zero_energy_filter
from program.waveops.operators import apply_wplus

FAMILY_KINDS = ("gaussian", "modulated", "hermite", "band-limited")
# uniform draws consumed per member, so a family is a prefix of any larger one
DRAWS = 9


def lp_norm(values: np.ndarray, spacing: float, p: float) -> float:
    return float((np.sum(np.abs(values) ** p) * spacing) ** (1.0 / p))


def derivative(f: GridFunction, cuts=()) -> np.ndarray:
    """Spectral derivative, or one-sided fourth-order stencils on each side of the cuts."""
    if len(cuts):
        return piecewise_derivative(f.values, f.grid.points, cuts)
    return apply_multiplier(f, lambda k: 1j * k).values


def sobolev_norm(f: GridFunction, p: float, cuts=()) -> float:
    """||f||_p + ||f'||_p."""
    return lp_norm(f.values, f.spacing, p) + lp_norm(derivative(f, cuts), f.spacing, p)


def _member(grid: SpatialGrid, index: int, draws: np.ndarray) -> np.ndarray:
    x = grid.points
    center = -5.0 + 10.0 * draws[0]
    width = 0.8 + 1.2 * draws[1]
    frequency = -3.0 + 6.0 * draws[2]
    envelope = np.exp(-((x - center) ** 2) / (2.0 * width**2))
    kind = FAMILY_KINDS[index % len(FAMILY_KINDS)]
    if kind == "gaussian":
        return envelope.astype(complex)
    if kind == "modulated":
        return envelope * np.exp(1j * frequency * x)
    if kind == "hermite":
        order = int(draws[3] * 7)
        scale = 1.0 + 0.5 * draws[4]
        s = (x - center) / scale
        return (special.eval_hermite(order, s) * np.exp(-(s**2) / 2.0)).astype(complex)
    # three modulated bumps with random complex weights
    out = np.zeros_like(x, dtype=complex)
    for j in range(3):
        shift = center + 2.0 * (draws[3 + j] - 0.5)
        weight = np.exp(2j * np.pi * draws[6 + j])
        out += weight * np.exp(-((x - shift) ** 2) / (2.0 * width**2) + 1j * frequency * (j - 1) * x)
    return out


def seeded_family(grid: SpatialGrid, size: int | None = None, seed: int | None = None, zero_energy: float | None = None) -> list[GridFunction]:
    """Unit-norm Gaussians, modulated Gaussians, Hermite functions and band-limited sums.

    With zero_energy > 0 every member passes zero_energy_filter at that scale first.
    """
    settings = settings_manager.settings.waveops
    size = settings.family_size if size is None else size
    seed = settings_manager.settings.seed if seed is None else seed
    zero_energy = settings.zero_energy_scale if zero_energy is None else zero_energy
    rng = np.random.default_rng(seed)
    family = []
    for index in range(size):
        f = GridFunction(grid, _member(grid, index, rng.uniform(size=DRAWS)))
        if zero_energy > 0:
            f = zero_energy_filter(f, zero_energy)
        family.append(f * (1.0 / f.norm()))
    return family


class SobolevReport(BaseModel):
    p: float
    # a lower bound on the operator norm
    ratio: float
    family_size: int
    worst_index: int


def sobolev_ratio(decomp: SpectralDecomposition, p: float, family: list[GridFunction]) -> SobolevReport:
    """max over the family of ||W_+ f||_{W^{1,p}} / ||f||_{W^{1,p}}."""
    if p <= 1.0:
        raise ValueError(f"p must exceed 1, got {p}; W_+ is not bounded on L^1")
    if not family:
        raise ValueError("the test family is empty")
    cuts = tuple(float(y) for y in decomp.spec.locations)
    ratios = [sobolev_norm(apply_wplus(decomp, f), p, cuts) / sobolev_norm(f, p) for f in family]
    worst = int(np.argmax(ratios))
    logger.log("WAVEOP", f"W^1,{p} ratio {ratios[worst]:.6f} over {len(family)} functions")
    return SobolevReport(p=p, ratio=float(ratios[worst]), family_size=len(family), worst_index=worst)


class StabilityReport(BaseModel):
    p: float
    ratio: float
    enlarged_ratio: float
    relative_change: float
    passed: bool


def family_stability(decomp: SpectralDecomposition, p: float, size: int | None = None, seed: int | None = None, tolerance: float | None = None) -> StabilityReport:
    """Compare the empirical sup over a family and over the family doubled."""
    settings = settings_manager.settings.waveops
    size = settings.family_size if size is None else size
    tolerance = settings.family_stability_tolerance if tolerance is None else tolerance
    enlarged = seeded_family(decomp.x_grid, 2 * size, seed)
    base = sobolev_ratio(decomp, p, enlarged[:size])
    full = sobolev_ratio(decomp, p, enlarged)
    change = abs(full.ratio - base.ratio) / base.ratio
    return StabilityReport(p=p, ratio=base.ratio, enlarged_ratio=full.ratio, relative_change=change, passed=change < tolerance)
