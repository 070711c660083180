"""Potential model: V = sum_j c_j delta(x - y_j) + V_reg(x).

The jump convention is u'(y_j+) - u'(y_j-) = c_j u(y_j).
"""
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from program.potential import presets


class DeltaTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    c: float
    y: float


class RegularPart(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["zero", "box", "gaussian", "exponential", "table"] = "zero"
    params: dict[str, Any] = {}
    support: tuple[float, float] | None = None
    mirrored: bool = False

    @property
    def preset(self) -> presets.Preset:
        return presets.get(self.kind, self.params)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.is_zero:
            return np.zeros_like(x)
        preset = self.preset
        s = -x if self.mirrored else x
        values = preset.evaluate(s)
        if self.support is not None:
            lo, hi = self.support
            values = np.where((s >= lo) & (s <= hi), values, 0.0)
        return values

    def _flip(self, interval: tuple[float, float] | None) -> tuple[float, float] | None:
        if interval is None or not self.mirrored:
            return interval
        return (-interval[1], -interval[0])

    @property
    def interval(self) -> tuple[float, float] | None:
        """Exact support, or None when the profile has unbounded support."""
        if self.is_zero:
            return None
        if self.support is not None:
            return self._flip(self.support)
        return self._flip(self.preset.interval)

    @property
    def window(self) -> tuple[float, float] | None:
        """Compact interval outside which V_reg is negligible."""
        if self.is_zero:
            return None
        interval = self.interval
        if interval is not None:
            return interval
        return self._flip(self.preset.window)

    @property
    def breakpoints(self) -> list[float]:
        if self.is_zero:
            return []
        points = list(self.preset.breakpoints)
        if self.support is not None:
            points.extend(self.support)
        if self.mirrored:
            points = [-p for p in points]
        return sorted(set(points))

    def reflected(self) -> "RegularPart":
        return self.model_copy(update={"mirrored": not self.mirrored})


class PotentialSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    deltas: list[DeltaTerm] = []
    regular: RegularPart = RegularPart()
    gamma: float = 1.6
    free: bool = False

    @property
    def locations(self) -> np.ndarray:
        return np.array([d.y for d in self.deltas], dtype=float)

    @property
    def strengths(self) -> np.ndarray:
        return np.array([d.c for d in self.deltas], dtype=float)

    @property
    def is_pure_delta(self) -> bool:
        return self.regular.is_zero

    @property
    def is_free(self) -> bool:
        return self.regular.is_zero and not self.deltas

    @property
    def is_symmetric(self) -> bool:
        """Even in x, judged from the data rather than by sampling."""
        mirrored = self.reflected()
        same_deltas = len(mirrored.deltas) == len(self.deltas) and all(
            np.isclose(a.c, b.c) and np.isclose(a.y, b.y)
            for a, b in zip(self.deltas, mirrored.deltas)
        )
        if not same_deltas:
            return False
        if self.regular.is_zero:
            return True
        window = self.regular.window
        points = np.linspace(-max(abs(window[0]), abs(window[1])), max(abs(window[0]), abs(window[1])), 257)
        return bool(np.allclose(self.regular(points), self.regular(-points)))

    @property
    def window(self) -> tuple[float, float] | None:
        """Smallest interval holding every delta and the regular window."""
        points = list(self.locations)
        if self.regular.window is not None:
            points.extend(self.regular.window)
        if not points:
            return None
        return (float(min(points)), float(max(points)))

    @property
    def support_radius(self) -> float:
        window = self.window
        if window is None:
            return 0.0
        return float(max(abs(window[0]), abs(window[1])))

    def evaluate(self, x) -> np.ndarray:
        """Regular part only; the deltas have no pointwise values."""
        return self.regular(x)

    def reflected(self) -> "PotentialSpec":
        """The potential x -> V(-x)."""
        deltas = [DeltaTerm(c=d.c, y=-d.y) for d in reversed(self.deltas)]
        return self.model_copy(update={"deltas": deltas, "regular": self.regular.reflected()})


def single_delta_spec(q: float, y: float = 0.0) -> PotentialSpec:
    """Delta whose coefficients match t_q = ik/(ik - q): strength c = 2q."""
    return PotentialSpec(deltas=[DeltaTerm(c=2.0 * q, y=y)])


def double_delta_spec(q: float, L: float) -> PotentialSpec:
    """The pair -q(delta(x+L) + delta(x-L)) of the half-Laplacian convention: c = -2q at +-L."""
    return PotentialSpec(deltas=[DeltaTerm(c=-2.0 * q, y=-L), DeltaTerm(c=-2.0 * q, y=L)])


FREE = PotentialSpec(free=True)
