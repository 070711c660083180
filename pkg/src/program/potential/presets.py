"""Closed-form and tabulated regular potentials.

Each preset turns a parameter dict into a `Preset`: a vectorised evaluator, the
natural support interval (``None`` when unbounded) and the points where the
profile is not smooth.
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Evaluator = Callable[[np.ndarray], np.ndarray]

# |V| falls below this fraction of its peak outside the effective window
WINDOW_DECAY = 1e-16


@dataclass(frozen=True)
class Preset:
    evaluate: Evaluator
    interval: tuple[float, float] | None
    breakpoints: tuple[float, ...] = field(default_factory=tuple)
    # compact window used by grid-based solvers when `interval` is unbounded
    window: tuple[float, float] | None = None


def _zero(params: dict) -> Preset:
    return Preset(evaluate=lambda x: np.zeros_like(np.asarray(x, dtype=float)), interval=None)


def _box(params: dict) -> Preset:
    height = float(params.get("height", 1.0))
    left = float(params.get("left", 0.0))
    right = float(params.get("right", 1.0))
    if not right > left:
        raise ValueError(f"box needs left < right, got [{left}, {right}]")

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        inside = np.where((x > left) & (x < right), height, 0.0)
        # mean of the one-sided limits at the edges
        edge = np.where((x == left) | (x == right), 0.5 * height, 0.0)
        return inside + edge

    return Preset(evaluate=evaluate, interval=(left, right), breakpoints=(left, right), window=(left, right))


def _gaussian(params: dict) -> Preset:
    amplitude = float(params.get("amplitude", 1.0))
    center = float(params.get("center", 0.0))
    width = float(params.get("width", 1.0))
    if width <= 0:
        raise ValueError("gaussian width must be positive")
    reach = width * np.sqrt(2.0 * np.log(1.0 / WINDOW_DECAY))

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        return amplitude * np.exp(-0.5 * ((x - center) / width) ** 2)

    return Preset(
        evaluate=evaluate,
        interval=None,
        breakpoints=(center,),
        window=(center - reach, center + reach),
    )


def _exponential(params: dict) -> Preset:
    amplitude = float(params.get("amplitude", 1.0))
    rate = float(params.get("rate", 1.0))
    center = float(params.get("center", 0.0))
    if rate <= 0:
        raise ValueError("exponential rate must be positive")
    reach = np.log(1.0 / WINDOW_DECAY) / rate

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        return amplitude * np.exp(-rate * np.abs(x - center))

    return Preset(
        evaluate=evaluate,
        interval=None,
        breakpoints=(center,),
        window=(center - reach, center + reach),
    )


def _table(params: dict) -> Preset:
    nodes = np.asarray(params.get("x", []), dtype=float)
    values = np.asarray(params.get("v", []), dtype=float)
    if nodes.ndim != 1 or nodes.size < 2 or nodes.shape != values.shape:
        raise ValueError("table needs matching 'x' and 'v' arrays with at least two samples")
    if np.any(np.diff(nodes) <= 0):
        raise ValueError("table 'x' samples must be strictly increasing")

    def evaluate(x):
        return np.interp(np.asarray(x, dtype=float), nodes, values, left=0.0, right=0.0)

    interval = (float(nodes[0]), float(nodes[-1]))
    return Preset(evaluate=evaluate, interval=interval, breakpoints=tuple(nodes.tolist()), window=interval)


presets: dict[str, Callable[[dict], Preset]] = {
    "zero": _zero,
    "box": _box,
    "gaussian": _gaussian,
    "exponential": _exponential,
    "table": _table,
}


def get(kind: str, params: dict) -> Preset:
    """Build a preset by name."""
    factory = presets.get(kind)
    if factory is None:
        raise ValueError(f"Unknown regular potential kind '{kind}', expected one of {sorted(presets)}")
    return factory(params)
