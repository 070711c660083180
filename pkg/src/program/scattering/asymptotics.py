"""Decay checks on T and R: the <k>^{-1} hypothesis, the double-delta t-dot limits and
the high-energy expansion T - 1 ~ (sum c_j + int V_reg) / (2ik)."""
from typing import Callable

import numpy as np
from pydantic import BaseModel

from program.potential.models import PotentialSpec
from program.potential.norms import total_strength
from program.scattering.closed_forms import double_delta_closed_form
from program.scattering.coefficients import scattering_coeffs
from program.scattering.mixed import mixed_scattering
from program.settings.manager import settings_manager
from program.utils.logging import logger

Coefficients = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


class ResonantConfigurationError(Exception):
    """qL = 1/2 makes the k -> 0 limit of the double-delta t-dot singular."""


def central_derivative(fn: Callable[[np.ndarray], np.ndarray], k: np.ndarray, step: np.ndarray) -> np.ndarray:
    """Fourth-order central difference (f(k-2h) - 8f(k-h) + 8f(k+h) - f(k+2h)) / 12h."""
    return (fn(k - 2 * step) - 8 * fn(k - step) + 8 * fn(k + step) - fn(k + 2 * step)) / (12 * step)


def derivative_steps(k: np.ndarray, radius: float = 0.0) -> np.ndarray:
    """h = step * max(1, |k|), capped so the phase e^{2ika} moves little across a stencil."""
    step = settings_manager.settings.scattering.derivative_step
    return np.minimum(step * np.maximum(1.0, np.abs(k)), 1e-3 / max(1.0, radius))


def window_growth(k: np.ndarray, values: np.ndarray, windows: int = 8) -> tuple[float, float]:
    """(sup, growth) where growth compares the last log-k window's max to the earlier max."""
    edges = np.geomspace(k.min(), k.max(), windows + 1)
    index = np.clip(np.searchsorted(edges, k, side="right") - 1, 0, windows - 1)
    maxima = np.array([values[index == w].max() if np.any(index == w) else 0.0 for w in range(windows)])
    earlier = maxima[:-1].max()
    growth = float(maxima[-1] / earlier - 1.0) if earlier > 0 else 0.0
    return float(values.max()), growth


class TdotReport(BaseModel):
    q: float
    L: float
    large_k_sup: float
    large_k_growth: float
    small_k_limit: float
    expected_small_k_limit: float
    small_k_relative_deviation: float
    passed: bool


def tdot_asymptotics_check(q: float, L: float, points: int = 400) -> TdotReport:
    """|t-dot| k bounded on [1e2, 1e4] and |t-dot| -> 1/|4q^2 L - 2q| as k -> 0."""
    if abs(q * L - 0.5) < 1e-6:
        raise ResonantConfigurationError(f"qL = {q * L} is within 1e-6 of 1/2")
    settings = settings_manager.settings.scattering

    def transmission(k):
        return double_delta_closed_form(q, L, k)[0]

    large = np.geomspace(1e2, 1e4, points)
    product = np.abs(central_derivative(transmission, large, derivative_steps(large, L))) * large
    sup, growth = window_growth(large, product)

    # the closed form is 0/0 at k = 0, so keep every stencil point positive
    small = np.array([1e-3, 1e-4, 1e-5])
    slopes = np.abs(central_derivative(transmission, small, small / 10))
    limit = float(slopes[-1])
    scale = abs(4 * q**2 * L - 2 * q)
    expected = 0.0 if q == 0 else 1.0 / scale
    deviation = abs(limit - expected) / expected if expected > 0 else limit

    passed = bool(np.isfinite(sup) and growth <= settings.growth_tolerance and deviation <= settings.growth_tolerance)
    logger.log("SCATTER", f"t-dot check q={q}, L={L}: sup |t'|k={sup:.4g}, k->0 limit {limit:.6g} vs {expected:.6g}")
    return TdotReport(
        q=q,
        L=L,
        large_k_sup=sup,
        large_k_growth=growth,
        small_k_limit=limit,
        expected_small_k_limit=expected,
        small_k_relative_deviation=deviation,
        passed=passed,
    )


class RTBoundReport(BaseModel):
    sups: dict[str, float]
    growths: dict[str, float]
    passed: bool


def coefficient_function(spec: PotentialSpec) -> Coefficients:
    """k -> (T, R1, R2) by the transfer matrix or the ODE path."""
    solver = scattering_coeffs if spec.is_pure_delta else mixed_scattering

    def evaluate(k):
        data = solver(spec, np.asarray(k, dtype=float))
        return data.T, data.R1, data.R2

    return evaluate


def rt_hypothesis_check(spec: PotentialSpec, k_lo: float = 1e-2, k_hi: float = 1e3, points: int = 400) -> RTBoundReport:
    """<k> |R|, <k> |T - 1|, <k> |dR/dk|, <k> |dT/dk| must not grow over [k_lo, k_hi]."""
    settings = settings_manager.settings.scattering
    evaluate = coefficient_function(spec)
    k = np.geomspace(k_lo, k_hi, points)
    step = derivative_steps(k, spec.support_radius)
    T, R1, R2 = evaluate(k)
    bracket = np.sqrt(1.0 + k**2)

    stencil = [evaluate(k + offset * step) for offset in (-2, -1, 1, 2)]

    def derivative(which):
        f = [values[which] for values in stencil]
        return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * step)

    quantities = {
        "R1": bracket * np.abs(R1),
        "R2": bracket * np.abs(R2),
        "T-1": bracket * np.abs(T - 1),
        "dR1": bracket * np.abs(derivative(1)),
        "dR2": bracket * np.abs(derivative(2)),
        "dT": bracket * np.abs(derivative(0)),
    }
    sups, growths = {}, {}
    for name, values in quantities.items():
        sups[name], growths[name] = window_growth(k, values)
    passed = all(np.isfinite(v) for v in sups.values()) and max(growths.values()) <= settings.growth_tolerance
    logger.log("SCATTER", f"<k> decay check: sup {max(sups.values()):.4g}, worst growth {max(growths.values()):.3%}")
    return RTBoundReport(sups=sups, growths=growths, passed=passed)


class HighEnergyReport(BaseModel):
    total_strength: float
    scaled_residual: float


def high_energy_check(spec: PotentialSpec, k) -> HighEnergyReport:
    """sup k^2 |T(k) - 1 - S/(2ik)| with S = sum c_j + int V_reg."""
    k = np.asarray(k, dtype=float)
    T = coefficient_function(spec)(k)[0]
    strength = total_strength(spec)
    residual = np.abs(T - 1 - strength / (2j * k)) * k**2
    return HighEnergyReport(total_strength=strength, scaled_residual=float(np.max(residual)))
