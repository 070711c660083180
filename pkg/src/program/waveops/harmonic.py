"""Fourier multipliers on the periodic extension of the spatial grid: Hilbert transform,
smooth frequency cutoffs and the parity reflection."""
from dataclasses import dataclass

import numpy as np
from scipy import fft

from program.spectral.grids import GridFunction
from program.spectral.transforms import zero_energy_taper


def grid_frequencies(f: GridFunction) -> np.ndarray:
    return 2.0 * np.pi * fft.fftfreq(f.grid.size, d=f.spacing)


def apply_multiplier(f: GridFunction, symbol) -> GridFunction:
    return f.with_values(fft.ifft(symbol(grid_frequencies(f)) * fft.fft(f.values)))


def smoothstep5(s: np.ndarray) -> np.ndarray:
    """6s^5 - 15s^4 + 10s^3 clipped to [0, 1]."""
    s = np.clip(s, 0.0, 1.0)
    return s**3 * (10.0 - 15.0 * s + 6.0 * s**2)


@dataclass(frozen=True)
class FrequencyCutoff:
    """psi(|k| <= k0): 1 up to k0, 0 from 2 k0, smoothstep5 in between."""

    k0: float

    def __post_init__(self):
        if self.k0 <= 0:
            raise ValueError("k0 must be positive")

    def __call__(self, k) -> np.ndarray:
        return 1.0 - smoothstep5((np.abs(np.asarray(k, dtype=float)) - self.k0) / self.k0)


def spatial_cutoff(x) -> np.ndarray:
    """chi(x >= 1): 0 up to 1/2, 1 from 1."""
    return smoothstep5(2.0 * np.asarray(x, dtype=float) - 1.0)


def hilbert_transform(f: GridFunction) -> GridFunction:
    """Multiplier -i sgn(k), with sgn(0) = 0 and the Nyquist mode of an even grid dropped."""

    def symbol(k):
        out = -1j * np.sign(k)
        if k.size % 2 == 0:
            out[k.size // 2] = 0.0
        return out

    return apply_multiplier(f, symbol)


def frequency_split(f: GridFunction, cutoff: FrequencyCutoff) -> tuple[GridFunction, GridFunction]:
    """(psi(|D| <= k0) f, f - psi(|D| <= k0) f)."""
    low = apply_multiplier(f, cutoff)
    return low, f - low


def parity(f: GridFunction) -> GridFunction:
    """(P f)(x) = f(-x) on the symmetric grid."""
    return f.with_values(f.values[::-1])


def zero_energy_filter(f: GridFunction, scale: float = 1.0, order: int = 2) -> GridFunction:
    """Remove the k = 0 content of f with the multiplier zero_energy_taper."""
    return apply_multiplier(f, lambda k: zero_energy_taper(k, scale, order))
