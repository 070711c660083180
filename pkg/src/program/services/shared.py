"""Pieces shared by the command services."""
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel

from program.potential.models import PotentialSpec
from program.utils.export import ArtifactWriter
from program.utils.logging import logger


class Check(BaseModel):
    name: str
    value: float | None
    tolerance: float | None = None
    passed: bool
    detail: str = ""


def check_below(name: str, value: float, tolerance: float, detail: str = "") -> Check:
    passed = bool(np.isfinite(value) and value < tolerance)
    return Check(name=name, value=float(value), tolerance=tolerance, passed=passed, detail=detail)


def check_flag(name: str, passed: bool, value: float | None = None, detail: str = "") -> Check:
    return Check(name=name, value=None if value is None else float(value), passed=bool(passed), detail=detail)


def failed(name: str, error: Exception) -> Check:
    """A check that could not be computed because a domain error was raised."""
    logger.error(f"{name}: {type(error).__name__}: {error}")
    return Check(name=name, value=None, passed=False, detail=f"{type(error).__name__}: {error}")


@dataclass
class RunContext:
    spec: PotentialSpec
    writer: ArtifactWriter
    options: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        level = "VERIFY" if check.passed else "WARNING"
        logger.log(level, f"{check.name}: {'pass' if check.passed else 'FAIL'} (value {check.value}, tolerance {check.tolerance})")
        return check

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def delta_parameters(spec: PotentialSpec) -> tuple[str, float, float] | None:
    """("single", q, y) for one delta, ("double", q, L) for an equal pair at +-L, else None."""
    if not spec.is_pure_delta:
        return None
    if len(spec.deltas) == 1:
        return "single", spec.deltas[0].c / 2.0, spec.deltas[0].y
    if len(spec.deltas) == 2 and spec.is_symmetric and np.isclose(spec.deltas[0].c, spec.deltas[1].c):
        return "double", -spec.deltas[0].c / 2.0, abs(spec.deltas[0].y)
    return None
