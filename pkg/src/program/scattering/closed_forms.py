"""Closed-form coefficients used as oracles for the transfer-matrix path."""
import numpy as np


def single_delta_closed_form(q: float, k) -> tuple[np.ndarray, np.ndarray]:
    """(t_q, r_q) = (ik/(ik - q), q/(ik - q)); matches a delta of strength 2q."""
    k = np.asarray(k, dtype=complex)
    denominator = 1j * k - q
    if np.any(denominator == 0):
        raise ZeroDivisionError("ik - q vanishes")
    return 1j * k / denominator, q / denominator


def double_delta_closed_form(q: float, L: float, k) -> tuple[np.ndarray, np.ndarray]:
    """(t_{q,L}, r_{q,L}) for the pair -q(delta(x+L) + delta(x-L)), i.e. strength -2q at +-L."""
    k = np.asarray(k, dtype=complex)
    forward = np.exp(2j * k * L)
    backward = np.exp(-2j * k * L)
    denominator = q**2 * forward - (1j * k + q) ** 2 * backward
    if np.any(denominator == 0):
        raise ZeroDivisionError("double delta denominator vanishes")
    transmission = k**2 / denominator * backward
    reflection = (q * (1j * k - q) * forward + q * (1j * k + q) * backward) / denominator * backward
    return transmission, reflection


def square_barrier_transmission(height: float, width: float, k) -> np.ndarray:
    """T for a barrier of the given height and width (position only changes R)."""
    k = np.asarray(k, dtype=complex)
    inner = np.sqrt(k**2 - height + 0j)
    # inner -> 0 is a removable singularity: sin(inner w)/inner -> w
    sinc = np.where(inner == 0, width, np.sin(inner * width) / np.where(inner == 0, 1.0, inner))
    denominator = np.cos(inner * width) - 1j * (k**2 + inner**2) / (2 * k) * sinc
    return np.exp(-1j * k * width) / denominator
