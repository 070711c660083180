"""Empirical constants for the kernel and Jost-function bounds.

Each check divides a sampled quantity by its majorant and reports the supremum of
the ratio. Grid points next to the lines x + y = const where the potential jumps are
left out, since there the bounds hold only in the sense of distributions.
"""
import numpy as np
from pydantic import BaseModel

from program.jost.kernel import B1Kernel
from program.jost.volterra import JostSolution
from program.potential.models import PotentialSpec
from program.potential.norms import gamma1, tail_profile
from program.settings.manager import settings_manager
from program.utils.derivatives import grid_derivative
from program.utils.logging import logger

DENOMINATOR_FLOOR = 1e-14


class KernelBoundReport(BaseModel):
    constant: float
    dx_constant: float
    points: int
    excluded_points: int
    vacuous: bool


class MBoundReport(BaseModel):
    a: float
    m1: dict[str, float]
    m2: dict[str, float]
    compact: dict[str, float]
    # sup of |m - 1| and friends where the majorant vanishes identically
    outside_support: float
    vacuous: bool
    passed: bool


class RefinementReport(BaseModel):
    coarse: dict[str, float]
    fine: dict[str, float]
    relative_change: dict[str, float]
    passed: bool


def jump_lines(spec: PotentialSpec) -> np.ndarray:
    """Points s where int_s^inf |V| or V(s) is not smooth."""
    points = list(spec.locations)
    if not spec.regular.is_zero:
        points.extend(spec.regular.breakpoints)
    return np.unique(np.asarray(points, dtype=float))


def _sup_ratio(numerator: np.ndarray, denominator: np.ndarray, mask: np.ndarray) -> tuple[float, int]:
    usable = mask & (denominator > DENOMINATOR_FLOOR)
    if not np.any(usable):
        return 0.0, 0
    return float(np.max(numerator[usable] / denominator[usable])), int(np.count_nonzero(usable))


def verify_kernel_bounds(spec: PotentialSpec, b1: B1Kernel, band: float = 0.02, spacing: float = 1e-4) -> KernelBoundReport:
    """sup |B1| / (e^{gamma1(x)} tail(x+y)) and sup |d_x B1| / (e^{gamma1(x)} (|V(x+y)| + tail(x+y)))."""
    s = b1.x_grid[:, None] + b1.y_grid[None, :]
    growth = np.exp(np.array([gamma1(spec, float(x)) for x in b1.x_grid]))[:, None]
    tail = tail_profile(spec, s.reshape(-1), spacing=spacing).reshape(s.shape)
    keep = np.ones(s.shape, dtype=bool)
    for line in jump_lines(spec):
        keep &= np.abs(s - line) >= band
    # y = 0 is the edge of the transform grid
    keep[:, 0] = False

    constant, points = _sup_ratio(np.abs(b1.values), growth * tail, keep)
    dx_majorant = growth * (np.abs(spec.regular(s)) + tail)
    dx_constant, _ = _sup_ratio(np.abs(b1.dx_values), dx_majorant, keep)
    report = KernelBoundReport(
        constant=constant,
        dx_constant=dx_constant,
        points=points,
        excluded_points=int(np.count_nonzero(~keep)),
        vacuous=points == 0,
    )
    logger.log("JOST", f"B1 bound constant {constant:.4g}, d_x B1 bound constant {dx_constant:.4g} over {points} points")
    return report


def _weighted_tail(spec: PotentialSpec, x: np.ndarray, spacing: float) -> np.ndarray:
    """int_x^inf |V_reg(t)| (1 + |t|) dt."""
    regular_only = spec.model_copy(update={"deltas": []})
    return tail_profile(regular_only, x, spacing=spacing, weight_power=1.0)


def _side_constants(
    m: np.ndarray,
    dm: np.ndarray,
    k: np.ndarray,
    majorant_x: np.ndarray,
) -> tuple[dict[str, float], float]:
    dk_m = grid_derivative(m, k, axis=1)
    majorant = majorant_x[:, None] / (1.0 + np.abs(k))[None, :]
    quantities = {"m-1": np.abs(m - 1.0), "dk_m": np.abs(dk_m), "dx_m": np.abs(dm)}
    constants = {}
    outside = 0.0
    void = majorant <= DENOMINATOR_FLOOR
    for name, values in quantities.items():
        constants[name], _ = _sup_ratio(values, majorant, np.ones(values.shape, dtype=bool))
        if np.any(void):
            outside = max(outside, float(np.max(values[void])))
    return constants, outside


def verify_m_bounds(spec: PotentialSpec, jost: JostSolution, a: float | None = None, spacing: float = 1e-4) -> MBoundReport:
    """Decay constants of m1 on x >= a and m2 on x <= -a, compact-region sups on |x| <= a."""
    a = spec.support_radius if a is None else a
    if a < spec.support_radius - 1e-12:
        logger.warning(f"a={a} is inside the support radius {spec.support_radius}; the decay bounds need not hold")
    x, k = jost.x_grid, jost.k_grid
    m1_constants, m2_constants, compact = {}, {}, {}
    outside = 0.0
    inner = np.abs(x) <= a

    if jost.m1 is not None:
        right = x >= a
        if np.any(right):
            m1_constants, void = _side_constants(jost.m1[right], jost.dm1[right], k, _weighted_tail(spec, x[right], spacing))
            outside = max(outside, void)
        if np.any(inner):
            compact["m1"] = float(np.max(np.abs(jost.m1[inner])))
            compact["dx_m1"] = float(np.max(np.abs(jost.dm1[inner])))
            compact["dk_m1"] = float(np.max(np.abs(grid_derivative(jost.m1[inner], k, axis=1))))
    if jost.m2 is not None:
        left = x <= -a
        if np.any(left):
            majorant = _weighted_tail(spec.reflected(), -x[left], spacing)
            m2_constants, void = _side_constants(jost.m2[left], jost.dm2[left], k, majorant)
            outside = max(outside, void)
        if np.any(inner):
            compact["m2"] = float(np.max(np.abs(jost.m2[inner])))
            compact["dx_m2"] = float(np.max(np.abs(jost.dm2[inner])))
            compact["dk_m2"] = float(np.max(np.abs(grid_derivative(jost.m2[inner], k, axis=1))))

    values = [*m1_constants.values(), *m2_constants.values(), *compact.values(), outside]
    report = MBoundReport(
        a=a,
        m1=m1_constants,
        m2=m2_constants,
        compact=compact,
        outside_support=outside,
        vacuous=not m1_constants and not m2_constants,
        passed=bool(np.all(np.isfinite(values))),
    )
    logger.log("JOST", f"m bounds at a={a}: m1 {m1_constants}, m2 {m2_constants}, compact {compact}")
    return report


def relative_changes(coarse: dict[str, float], fine: dict[str, float]) -> dict[str, float]:
    """|fine - coarse| / |fine| per shared key; 0 when both vanish."""
    changes = {}
    for name in coarse.keys() & fine.keys():
        scale = max(abs(fine[name]), abs(coarse[name]))
        changes[name] = abs(fine[name] - coarse[name]) / scale if scale > 0 else 0.0
    return changes


def refinement_report(coarse: dict[str, float], fine: dict[str, float], tolerance: float | None = None) -> RefinementReport:
    tolerance = settings_manager.settings.jost.refinement_tolerance if tolerance is None else tolerance
    changes = relative_changes(coarse, fine)
    passed = all(change < tolerance for change in changes.values())
    if not passed:
        logger.warning(f"Bound constants moved more than {tolerance:.0%} under refinement: {changes}")
    return RefinementReport(coarse=coarse, fine=fine, relative_change=changes, passed=passed)
