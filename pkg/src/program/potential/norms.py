"""Weighted norms and tail integrals of a potential."""
from typing import Callable

import numpy as np
from scipy import integrate

from program.potential.models import PotentialSpec
from program.settings.manager import settings_manager


class DivergentIntegralError(Exception):
    """Adaptive quadrature did not converge under the configured tolerance."""


def _quad(fn: Callable[[float], float], lo: float, hi: float) -> float:
    settings = settings_manager.settings.potential
    result = integrate.quad(
        fn,
        lo,
        hi,
        epsabs=settings.quad_abs_tolerance,
        epsrel=settings.quad_rel_tolerance,
        limit=settings.quad_limit,
        full_output=1,
    )
    # a fourth element is only present when quad flags a problem
    if len(result) > 3:
        raise DivergentIntegralError(f"quadrature on [{lo}, {hi}] failed: {result[3]}")
    return float(result[0])


def integrate_piecewise(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    breakpoints: list[float] | tuple[float, ...] = (),
) -> float:
    """Integrate fn over [lo, hi] (either end may be infinite), splitting at breakpoints."""
    if hi <= lo:
        return 0.0
    inner = sorted({float(p) for p in breakpoints if lo < p < hi})
    edges = [lo, *inner, hi]
    return sum(_quad(fn, a, b) for a, b in zip(edges[:-1], edges[1:]))


def _regular_bounds(spec: PotentialSpec) -> tuple[float, float]:
    interval = spec.regular.interval
    if interval is None:
        return -np.inf, np.inf
    return interval


def weighted_l1_norm(spec: PotentialSpec, gamma: float | None = None) -> float:
    """int (1+|s|)^gamma |V_reg(s)| ds; the deltas are excluded."""
    gamma = spec.gamma if gamma is None else gamma
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    if spec.regular.is_zero:
        return 0.0
    lo, hi = _regular_bounds(spec)
    regular = spec.regular

    def integrand(s):
        return (1.0 + abs(s)) ** gamma * abs(float(regular(s)))

    return integrate_piecewise(integrand, lo, hi, [0.0, *regular.breakpoints])


def gamma1(spec: PotentialSpec, x: float) -> float:
    """First-moment tail int_x^inf (t - x)|V(t)| dt, deltas included as point masses."""
    total = float(sum(abs(d.c) * (d.y - x) for d in spec.deltas if d.y > x))
    if spec.regular.is_zero:
        return total
    lo, hi = _regular_bounds(spec)
    regular = spec.regular

    def integrand(t):
        return (t - x) * abs(float(regular(t)))

    return total + integrate_piecewise(integrand, max(lo, x), hi, regular.breakpoints)


def tail_integral(spec: PotentialSpec, s: float, absolute: bool = True) -> float:
    """int_s^inf |V(t)| dt with half of a delta counted when it sits at s."""
    c = np.abs(spec.strengths) if absolute else spec.strengths
    y = spec.locations
    total = float(np.sum(c[y > s]) + 0.5 * np.sum(c[y == s]))
    if spec.regular.is_zero:
        return total
    lo, hi = _regular_bounds(spec)
    regular = spec.regular

    def integrand(t):
        value = float(regular(t))
        return abs(value) if absolute else value

    return total + integrate_piecewise(integrand, max(lo, s), hi, regular.breakpoints)


def total_strength(spec: PotentialSpec) -> float:
    """sum_j c_j + int V_reg, the coefficient of the 1/(2ik) term of T at high energy."""
    total = float(np.sum(spec.strengths))
    if spec.regular.is_zero:
        return total
    lo, hi = _regular_bounds(spec)
    regular = spec.regular
    return total + integrate_piecewise(lambda t: float(regular(t)), lo, hi, regular.breakpoints)


def fine_grid(spec: PotentialSpec, spacing: float) -> np.ndarray:
    """Uniform grid over the regular window including its breakpoints."""
    window = spec.regular.window
    if window is None:
        return np.array([], dtype=float)
    lo, hi = window
    count = max(int(np.ceil((hi - lo) / spacing)), 1)
    nodes = np.linspace(lo, hi, count + 1)
    extra = [p for p in spec.regular.breakpoints if lo <= p <= hi]
    return np.unique(np.concatenate([nodes, extra]))


def tail_profile(spec: PotentialSpec, s: np.ndarray, spacing: float = 1e-3, weight_power: float = 0.0) -> np.ndarray:
    """Vectorised int_s^inf (1+|t|)^p |V(t)| dt by reverse cumulative trapezoid."""
    s = np.asarray(s, dtype=float)
    y = spec.locations
    c = np.abs(spec.strengths) * (1.0 + np.abs(y)) ** weight_power
    # delta contribution: full mass strictly to the right, half on the location
    heaviside = np.where(y[None, :] > s.reshape(-1, 1), 1.0, np.where(y[None, :] == s.reshape(-1, 1), 0.5, 0.0))
    total = (heaviside @ c).reshape(s.shape) if y.size else np.zeros_like(s)
    if spec.regular.is_zero:
        return total
    nodes = fine_grid(spec, spacing)
    integrand = (1.0 + np.abs(nodes)) ** weight_power * np.abs(spec.regular(nodes))
    forward = integrate.cumulative_trapezoid(integrand, nodes, initial=0.0)
    tails = forward[-1] - forward
    return total + np.interp(s, nodes, tails, left=tails[0], right=0.0)
