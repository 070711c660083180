"""Admissibility checks for a potential."""
import numpy as np
from pydantic import BaseModel

from program.potential.models import PotentialSpec
from program.potential.norms import DivergentIntegralError, weighted_l1_norm
from program.utils.logging import logger


class PotentialValidationError(Exception):
    """The potential violates one or more admissibility conditions."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


class PotentialReport(BaseModel):
    passed: bool
    violations: list[str] = []
    weighted_norm: float | None = None
    gamma: float
    delta_count: int
    # a = max |y_j|, widened to the regular support when there is one
    support_radius: float


def check(spec: PotentialSpec) -> PotentialReport:
    """Collect every violated condition without raising."""
    violations = []

    for index, delta in enumerate(spec.deltas):
        if delta.c == 0:
            violations.append(f"delta {index} has zero strength")
        if not np.isfinite(delta.c) or not np.isfinite(delta.y):
            violations.append(f"delta {index} is not finite")

    locations = spec.locations
    if locations.size > 1 and np.any(np.diff(locations) <= 0):
        violations.append("delta locations are not strictly increasing")

    if spec.is_free and not spec.free:
        violations.append("potential is trivial but not flagged as the free Hamiltonian")
    if spec.free and not spec.is_free:
        violations.append("potential is flagged free but carries deltas or a regular part")

    if spec.gamma < 0:
        violations.append(f"weight exponent gamma={spec.gamma} is negative")

    norm = None
    if not spec.regular.is_zero:
        try:
            spec.regular.preset
        except ValueError as e:
            violations.append(f"regular part: {e}")
        else:
            try:
                norm = weighted_l1_norm(spec, max(spec.gamma, 0.0))
            except DivergentIntegralError as e:
                violations.append(f"weighted norm diverges: {e}")

    radius = float(np.max(np.abs(locations))) if locations.size else 0.0
    if not violations and spec.regular.window is not None:
        radius = max(radius, spec.support_radius)

    return PotentialReport(
        passed=not violations,
        violations=violations,
        weighted_norm=norm,
        gamma=spec.gamma,
        delta_count=len(spec.deltas),
        support_radius=radius,
    )


def validate(spec: PotentialSpec) -> PotentialReport:
    """Check the potential and raise with the full list of violations on failure."""
    report = check(spec)
    if not report.passed:
        for violation in report.violations:
            logger.log("POTENTIAL", f"Invalid potential: {violation}")
        raise PotentialValidationError(report.violations)
    logger.log(
        "POTENTIAL",
        f"Potential ok: {report.delta_count} deltas, a={report.support_radius:.4g}, "
        f"weighted norm={report.weighted_norm if report.weighted_norm is not None else 0.0:.6g}",
    )
    return report
