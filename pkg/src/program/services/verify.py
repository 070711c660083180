"""Verify command: every service in turn, then a pass/fail summary."""
from rich.live import Live
from rich.table import Table

from program.dynamics import BlowUpError
from program.jost import GridTooCoarseError, NonConvergenceError
from program.scattering import StepSizeUnderflowError
from program.services.evolve import EvolveService
from program.services.jost import JostService
from program.services.scatter import ScatterService
from program.services.shared import RunContext, failed
from program.services.waveop import WaveOpService
from program.spectral import DiscrepancyError
from program.utils.logging import console, create_progress_bar, logger

DOMAIN_ERRORS = (StepSizeUnderflowError, NonConvergenceError, GridTooCoarseError, DiscrepancyError, BlowUpError, ValueError)


def summary_table(context: RunContext) -> Table:
    table = Table(title=f"Verification of {context.options.get('potential', 'potential')}")
    table.add_column("Check")
    table.add_column("Value", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Result", justify="center")
    for check in context.checks:
        value = "" if check.value is None else f"{check.value:.3e}"
        tolerance = "" if check.tolerance is None else f"{check.tolerance:.0e}"
        result = "[green]pass[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(check.name, value, tolerance, result)
    return table


class VerifyService:
    """Runs the acceptance suite on one potential."""

    def __init__(self):
        self.key = "verify"
        self.services = [ScatterService(), JostService(), WaveOpService(), EvolveService()]
        self.initialized = self.validate()

    def validate(self) -> bool:
        return all(service.initialized for service in self.services)

    def run(self, context: RunContext) -> RunContext:
        progress, progress_console = create_progress_bar(len(self.services))
        task = progress.add_task("Verifying", total=len(self.services), log="")
        with Live(progress, console=progress_console, refresh_per_second=10):
            for service in self.services:
                progress.update(task, log=service.key)
                try:
                    service.run(context)
                except DOMAIN_ERRORS as e:
                    context.add(failed(service.key, e))
                progress.update(task, advance=1)
        context.writer.rows(
            "summary.csv",
            ["check", "value", "tolerance", "passed"],
            [[c.name, "" if c.value is None else repr(c.value), "" if c.tolerance is None else repr(c.tolerance), int(c.passed)] for c in context.checks],
        )
        console.print(summary_table(context))
        failures = [check.name for check in context.checks if not check.passed]
        if failures:
            logger.warning(f"{len(failures)} of {len(context.checks)} checks failed: {', '.join(failures)}")
        else:
            logger.log("COMPLETED", f"All {len(context.checks)} checks passed")
        return context

