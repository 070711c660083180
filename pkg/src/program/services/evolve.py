"""Evolve command: linear propagation and decay, the NLS solver and the double-well demo."""
import numpy as np

from program.dynamics import (
    BlowUpError,
    EvolutionTrace,
    NLSConfig,
    convergence_order,
    dispersive_decay_study,
    double_well_demo,
    evolve_linear,
    linear_trace,
    mass_drift,
    nls_solve,
)
from program.services.shared import RunContext, check_below, check_flag, delta_parameters, failed
from program.settings.manager import settings_manager
from program.spectral import GridFunction, build_decomposition, continuous_packet
from program.utils.export import ArtifactWriter
from program.utils.logging import logger

MODES = ("linear", "nls", "double-well")
TRACE_FRAMES = 11


def write_trace(writer: ArtifactWriter, prefix: str, trace: EvolutionTrace) -> None:
    """{prefix}_trace.csv in long format (t, x, u) and {prefix}_diagnostics.csv."""
    x = trace.states[0].grid.points
    t = np.repeat(trace.times, x.size)
    u = np.concatenate([state.values for state in trace.states])
    writer.table(f"{prefix}_trace.csv", {"t": t, "x": np.tile(x, trace.times.size), "u": u})
    writer.table(f"{prefix}_diagnostics.csv", dict(trace.diagnostics))


def bump(decomp, center: float = 0.0, width: float = 1.0) -> GridFunction:
    x = decomp.x_grid.points
    f = GridFunction(decomp.x_grid, np.exp(-((x - center) ** 2) / (2 * width**2)).astype(complex))
    return f * (1.0 / f.norm())


class EvolveService:
    """Drives the dynamics package for one potential."""

    def __init__(self):
        self.key = "evolve"
        self.settings = settings_manager.settings.dynamics
        self.initialized = self.validate()

    def validate(self) -> bool:
        return len(self.settings.decay_times) >= 2

    def run(self, context: RunContext) -> RunContext:
        modes = context.options.get("modes") or list(MODES)
        decomp = build_decomposition(context.spec)
        if "linear" in modes:
            self._linear(context, decomp)
        if "nls" in modes:
            self._nls(context, decomp)
        if "double-well" in modes:
            self._double_well(context, decomp)
        return context

    def _linear(self, context: RunContext, decomp) -> None:
        # band-limited for H, so P_c f = f on the grid
        f = continuous_packet(decomp)
        t_final = context.options.get("t_final") or settings_manager.settings.nls.t_final
        trace = linear_trace(decomp, f, np.linspace(0.0, t_final, TRACE_FRAMES))
        write_trace(context.writer, "linear", trace)

        mass = trace.diagnostics["mass"]
        context.add(check_below("linear flow conserves mass", float(np.max(np.abs(mass - mass[0]))), self.settings.norm_tolerance))
        half = evolve_linear(decomp, evolve_linear(decomp, f, 0.5 * t_final), 0.5 * t_final)
        whole = evolve_linear(decomp, f, t_final)
        context.add(check_below("linear group law", half.relative_distance(whole), self.settings.norm_tolerance))

        report = dispersive_decay_study(decomp, f)
        context.writer.table(
            "decay.csv",
            {"t": np.array(report.times), "sup": np.array(report.sup_norms), "scaled": np.sqrt(report.times) * np.array(report.sup_norms)},
        )
        context.writer.report("decay.json", report)
        context.add(check_flag("dispersive decay slope", report.passed, report.slope))

    def _nls(self, context: RunContext, decomp) -> None:
        cfg = NLSConfig.from_settings()
        u0 = bump(decomp)
        try:
            trace = nls_solve(decomp, u0, cfg)
        except BlowUpError as e:
            context.add(failed("NLS solve", e))
            return
        write_trace(context.writer, "nls", trace)
        tolerance = settings_manager.settings.nls.mass_drift_tolerance
        context.add(check_below("NLS mass drift", mass_drift(trace), tolerance))
        if cfg.coupling != 0.0:
            report = convergence_order(decomp, u0, cfg)
            context.writer.report("nls_convergence.json", report)
            context.add(check_flag("NLS dt-halving order", report.passed, report.ratio))

    def _double_well(self, context: RunContext, decomp) -> None:
        parameters = delta_parameters(context.spec)
        if parameters is None or parameters[0] != "double":
            logger.log("DYNAMICS", "Double-well demo skipped: the potential is not a symmetric delta pair")
            return
        _, q, L = parameters
        cfg = NLSConfig.from_settings(coupling=context.options.get("coupling", 0.0))
        try:
            demo = double_well_demo(q, L, cfg, recipe=context.options.get("recipe", "bound-pair"), decomp=decomp)
        except (ValueError, BlowUpError) as e:
            context.add(failed("double-well demo", e))
            return
        write_trace(context.writer, "double_well", demo.trace)
        context.writer.report("double_well.json", demo.report)
        if demo.report.mode == "balance":
            context.add(check_flag("double-well even datum balance", demo.report.passed, demo.report.imbalance))
        elif cfg.coupling == 0.0:
            context.add(check_flag("double-well beat period", demo.report.passed, demo.report.relative_error))
