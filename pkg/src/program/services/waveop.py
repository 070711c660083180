"""Waveop command: wave-operator identities, intertwining, Sobolev ratios and kernel constants."""
import numpy as np

from program.dynamics import resolvent_sandwich
from program.jost import GridTooCoarseError, NonConvergenceError, b1_kernel
from program.services.shared import RunContext, check_below, check_flag, failed
from program.settings.manager import settings_manager
from program.spectral import (
    DiscrepancyError,
    GridFunction,
    SpatialGrid,
    WavenumberGrid,
    build_decomposition,
    continuous_packet,
    lippmann_schwinger_residual,
    pc_project,
    pc_route_agreement,
    source_agreement,
    spectral_coverage,
)
from program.utils.logging import logger
from program.waveops import (
    FrequencyCutoff,
    apply_wplus,
    default_borels,
    family_stability,
    identity_residuals,
    intertwining_check,
    reassemble_wplus,
    seeded_family,
    sj_kernel,
    sobolev_ratio,
    young_chain,
)

# members of the family pushed through the intertwining and sandwich studies
STUDY_SIZE = 10
# the transfer-matrix and Jost waves are compared on a small window around the deltas
SOURCE_MARGIN = 3.0
SOURCE_K_MAX = 8.0


class WaveOpService:
    """Drives the waveops package for one potential."""

    def __init__(self):
        self.key = "waveop"
        self.settings = settings_manager.settings.waveops
        self.initialized = self.validate()

    def validate(self) -> bool:
        return self.settings.family_size > 0 and all(p > 1.0 for p in self.settings.p_values)

    def run(self, context: RunContext) -> RunContext:
        spec, writer = context.spec, context.writer
        decomp = build_decomposition(spec)
        family = seeded_family(decomp.x_grid, seed=context.options.get("seed"))

        reports = [identity_residuals(decomp, f) for f in family]
        columns = {"index": np.arange(len(reports))}
        for field in ("isometry", "star_then_w", "w_then_star", "adjointness"):
            columns[field] = np.array([getattr(r, field) for r in reports])
        writer.table("identities.csv", columns)
        for field in ("isometry", "star_then_w", "w_then_star"):
            context.add(check_below(f"W_+ {field.replace('_', ' ')}", float(np.max(columns[field])), self.settings.identity_tolerance))
        context.add(check_below("W_+ adjointness", float(np.max(columns["adjointness"])), self.settings.adjoint_tolerance))

        images = [apply_wplus(decomp, f) for f in family[:STUDY_SIZE]]
        intertwining = {}
        for name, borel in default_borels().items():
            intertwining[name] = max(intertwining_check(decomp, u, borel) for u in images)
        writer.report("intertwining.json", intertwining)
        for name in ("propagator", "resolvent"):
            context.add(check_below(f"intertwining ({name})", intertwining[name], self.settings.identity_tolerance))

        sandwiches = [resolvent_sandwich(decomp, u) for u in images]
        writer.report(
            "sandwich.json",
            {"ratios": [s.ratio for s in sandwiches], "route_discrepancies": [s.route_discrepancy for s in sandwiches]},
        )
        context.add(check_below("resolvent sandwich routes", max(s.route_discrepancy for s in sandwiches), self.settings.identity_tolerance))

        self._spectral(context, decomp, family[0])
        self._sobolev(context, decomp, family)
        self._reassembly(context, decomp)
        if not spec.regular.is_zero:
            self._young(context)
        return context

    def _spectral(self, context: RunContext, decomp, datum) -> None:
        spectral = settings_manager.settings.spectral
        packet = continuous_packet(decomp)
        report = {
            "orthonormality_residual": decomp.diagnostics["orthonormality_residual"],
            "coverage": spectral_coverage(decomp, packet),
            "route_agreement": pc_route_agreement(decomp, datum),
        }
        try:
            report["pc_discrepancy"] = pc_project(decomp, packet).discrepancy
        except DiscrepancyError as e:
            context.add(failed("P_c routes", e))
        else:
            context.add(check_below("P_c routes", report["pc_discrepancy"], spectral.pc_discrepancy_tolerance))
        context.add(check_below("P_c half-line form", report["route_agreement"], self.settings.adjoint_tolerance))
        logger.log("SPECTRAL", f"Mass outside the k window: {report['coverage']:.2e}")
        if context.spec.is_pure_delta:
            report["lippmann_schwinger"] = lippmann_schwinger_residual(context.spec, decomp.table)
            context.add(check_below("Lippmann-Schwinger residual", report["lippmann_schwinger"], self.settings.adjoint_tolerance))
            if context.spec.deltas:
                self._sources(context, report)
        context.writer.report("spectral.json", report)

    def _sources(self, context: RunContext, report: dict) -> None:
        grid = settings_manager.settings.grid
        spec = context.spec
        reach = max(abs(y) for y in spec.locations) + SOURCE_MARGIN
        x_grid = SpatialGrid.symmetric(reach, grid.dx, jumps=spec.locations)
        k_grid = WavenumberGrid.midpoint(min(grid.k_max, SOURCE_K_MAX), np.pi / (4.0 * reach))
        try:
            report["source_agreement"] = source_agreement(spec, k_grid, x_grid)
        except (GridTooCoarseError, NonConvergenceError) as e:
            context.add(failed("transfer-matrix vs Jost waves", e))
            return
        tolerance = settings_manager.settings.jost.richardson_tolerance
        context.add(check_below("transfer-matrix vs Jost waves", report["source_agreement"], tolerance))

    def _sobolev(self, context: RunContext, decomp, family) -> None:
        ratios = [sobolev_ratio(decomp, p, family) for p in self.settings.p_values]
        context.writer.table(
            "sobolev_ratios.csv",
            {
                "p": np.array([r.p for r in ratios]),
                "ratio": np.array([r.ratio for r in ratios]),
                "family_size": np.array([r.family_size for r in ratios]),
            },
        )
        if decomp.spec.is_free:
            deviation = max(abs(r.ratio - 1.0) for r in ratios)
            context.add(check_below("Sobolev ratio of the identity", deviation, self.settings.identity_tolerance))
        stability = [family_stability(decomp, p, seed=context.options.get("seed")) for p in self.settings.p_values if p >= 1.5]
        context.writer.report("sobolev_stability.json", {"reports": [s.model_dump() for s in stability]})
        for report in stability:
            context.add(check_flag(f"Sobolev ratio stable (p={report.p})", report.passed, report.relative_change))

    def _reassembly(self, context: RunContext, decomp) -> None:
        phi = GridFunction(decomp.x_grid, np.exp(-((decomp.x_grid.points - 1.0) ** 2)).astype(complex))
        try:
            result = reassemble_wplus(decomp, phi, FrequencyCutoff(decomp.k_grid.k_max / 4.0))
        except (GridTooCoarseError, NonConvergenceError) as e:
            context.add(failed("six-term reassembly", e))
            return
        columns = {"x": result.x, **{name: values for name, values in result.terms.items()}, "total": result.total, "direct": result.direct}
        context.writer.table("reassembly.csv", columns)
        tolerance = settings_manager.settings.jost.richardson_tolerance
        context.add(check_below("six-term reassembly", result.residual, tolerance))

    def _young(self, context: RunContext) -> None:
        spec = context.spec
        jost = settings_manager.settings.jost
        window = spec.window
        x = np.linspace(window[0] - 1.0, window[1] + 1.0, 41)
        try:
            coarse = b1_kernel(spec, x)
            fine = b1_kernel(spec, x, k_max=2 * jost.b1_k_max, quad_dx=jost.quad_dx / 2)
        except (GridTooCoarseError, NonConvergenceError) as e:
            context.add(failed("Young chain", e))
            return
        chains = {label: young_chain(spec, sj_kernel(b1)) for label, b1 in (("coarse", coarse), ("fine", fine))}
        context.writer.report("young_chain.json", {label: chain.model_dump() for label, chain in chains.items()})
        if chains["coarse"].ratio is None:
            logger.warning("Young chain: the regular part has zero weighted norm")
            return
        change = abs(chains["fine"].ratio - chains["coarse"].ratio) / chains["coarse"].ratio
        context.add(check_below("Young constant refinement", change, jost.refinement_tolerance))
