"""Jost command: m1/m2 tables, the B1 kernel against the K_n series, and the bound constants."""
import numpy as np

from program.jost import (
    GridTooCoarseError,
    NonConvergenceError,
    b1_kernel,
    kn_series,
    refinement_report,
    solve_jost,
    verify_kernel_bounds,
    verify_m_bounds,
)
from program.jost.bounds import jump_lines
from program.services.shared import RunContext, check_below, check_flag, failed
from program.settings.manager import settings_manager
from program.utils.logging import logger

LATTICE_STEP = 0.02
# distance from the kink lines x + y = y_j inside which B1 and sum K_n are not compared
KINK_BAND = 0.02


def _lattice_axis(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(np.rint((hi - lo) / step))
    return lo + step * np.arange(count + 1)


class JostService:
    """Drives the jost package for one potential."""

    def __init__(self):
        self.key = "jost"
        self.settings = settings_manager.settings.jost
        self.initialized = self.validate()

    def validate(self) -> bool:
        return self.settings.quad_dx > 0 and self.settings.kn_terms >= 1

    def run(self, context: RunContext) -> RunContext:
        spec, writer = context.spec, context.writer
        window = spec.window or (0.0, 0.0)
        lo, hi = np.floor(window[0]) - 1.0, np.ceil(window[1]) + 1.0
        x = _lattice_axis(lo, hi, LATTICE_STEP)
        k = np.linspace(0.25, settings_manager.settings.grid.k_max, 48)

        try:
            jost = solve_jost(spec, k, x)
        except (GridTooCoarseError, NonConvergenceError) as e:
            context.add(failed("Jost solutions", e))
            return context
        X, K = np.meshgrid(x, k, indexing="ij")
        writer.table("jost_m.csv", {"x": X.ravel(), "k": K.ravel(), "m1": jost.m1.ravel(), "m2": jost.m2.ravel()})
        writer.table("jost_coefficients.csv", {"k": k, "T": jost.T, "R1": jost.R1, "R2": jost.R2})
        wronskian = np.abs(jost.wronskian() * jost.T[None, :] / (-2j * k[None, :]) - 1.0)
        # the derivatives jump at the deltas
        smooth = np.all(np.abs(x[:, None] - np.asarray(spec.locations, dtype=float)[None, :]) > LATTICE_STEP / 2, axis=1)
        context.add(check_below("Wronskian", float(np.max(wronskian[smooth])), self.settings.richardson_tolerance))

        m_bounds = verify_m_bounds(spec, jost)
        writer.report("m_bounds.json", m_bounds)
        context.add(check_flag("m bounds finite", m_bounds.passed))

        coarse_x = x[::5]
        try:
            b1 = b1_kernel(spec, coarse_x)
        except (GridTooCoarseError, NonConvergenceError) as e:
            context.add(failed("B1 kernel", e))
            return context
        for message in b1.warnings:
            context.add(check_flag("B1 aliasing", False, detail=message))
        self._compare_series(context, b1, coarse_x)

        kernel_bounds = verify_kernel_bounds(spec, b1)
        fine = b1_kernel(spec, coarse_x, k_max=2 * self.settings.b1_k_max, quad_dx=self.settings.quad_dx / 2)
        fine_bounds = verify_kernel_bounds(spec, fine)
        writer.report("kernel_bounds.json", {"coarse": kernel_bounds.model_dump(), "fine": fine_bounds.model_dump()})
        if not kernel_bounds.vacuous:
            refinement = refinement_report(
                {"B1": kernel_bounds.constant, "dx_B1": kernel_bounds.dx_constant},
                {"B1": fine_bounds.constant, "dx_B1": fine_bounds.dx_constant},
            )
            writer.report("kernel_refinement.json", refinement)
            context.add(check_flag("kernel bound refinement", refinement.passed, max(refinement.relative_change.values())))
        return context

    def _compare_series(self, context: RunContext, b1, x: np.ndarray) -> None:
        spec, writer = context.spec, context.writer
        y = _lattice_axis(0.0, 2.0, LATTICE_STEP)
        try:
            series = kn_series(spec, x, y, h=LATTICE_STEP)
        except ValueError as e:
            logger.warning(f"K_n series skipped: {e}")
            return
        interpolated = np.array([np.interp(y, b1.y_grid, row) for row in b1.values])
        s = x[:, None] + y[None, :]
        keep = np.ones(s.shape, dtype=bool)
        for line in jump_lines(spec):
            keep &= np.abs(s - line) >= KINK_BAND
        keep[:, 0] = False
        difference = np.abs(interpolated - series.total)
        X, Y = np.meshgrid(x, y, indexing="ij")
        writer.table("b1.csv", {"x": X.ravel(), "y": Y.ravel(), "B1": interpolated.ravel(), "Kn_sum": series.total.ravel()})
        writer.table("kn_terms.csv", {"n": np.arange(len(series.terms)), "sup": np.array([np.max(np.abs(t)) for t in series.terms])})
        sup = float(np.max(difference[keep])) if np.any(keep) else 0.0
        context.add(check_below("B1 against sum K_n", sup, self.settings.aliasing_tolerance))
        if spec.is_pure_delta and len(spec.deltas) == 1:
            context.add(check_below("K_1 vanishes for one delta", float(np.max(np.abs(series.terms[1]))), 1e-12))
