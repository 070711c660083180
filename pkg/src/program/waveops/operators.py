"""Wave operators W_+ = F_+^* F_0 and W_- = F_-^* F_0 with their adjoints, and the
identities they satisfy on the grid."""
from typing import Callable

import numpy as np
from pydantic import BaseModel

from program.settings.manager import settings_manager
from program.spectral.decomposition import SpectralDecomposition
from program.spectral.grids import GridFunction
from program.spectral.transforms import (
    distorted_ft,
    distorted_ft_adjoint,
    distorted_multiplier,
    free_multiplier,
    incoming_ft,
    incoming_ft_adjoint,
    unitary_ft,
    unitary_ft_adjoint,
)
from program.utils.logging import logger

Borel = Callable[[np.ndarray], np.ndarray]


def band_limit_warning(spectrum: GridFunction, tolerance: float | None = None) -> str | None:
    """Message when the transform has not decayed at the ends of the k window."""
    tolerance = settings_manager.settings.waveops.band_limit_tolerance if tolerance is None else tolerance
    edge = max(abs(spectrum.values[0]), abs(spectrum.values[-1]))
    if edge > tolerance * max(spectrum.sup(), np.finfo(float).tiny):
        message = f"Band limit: |F f| = {edge:.2e} at k = +-{spectrum.grid.k_max:.4g}"
        logger.warning(message)
        return message
    return None


def _free_analysis(decomp: SpectralDecomposition, f: GridFunction) -> GridFunction:
    spectrum = unitary_ft(decomp.table, f)
    band_limit_warning(spectrum)
    return spectrum


def apply_wplus(decomp: SpectralDecomposition, f: GridFunction) -> GridFunction:
    return distorted_ft_adjoint(decomp.table, _free_analysis(decomp, f))


def apply_wplus_star(decomp: SpectralDecomposition, f: GridFunction) -> GridFunction:
    return unitary_ft_adjoint(decomp.table, distorted_ft(decomp.table, f))


def apply_wminus(decomp: SpectralDecomposition, f: GridFunction) -> GridFunction:
    return incoming_ft_adjoint(decomp.table, _free_analysis(decomp, f))


def apply_wminus_star(decomp: SpectralDecomposition, f: GridFunction) -> GridFunction:
    return unitary_ft_adjoint(decomp.table, incoming_ft(decomp.table, f))


class IdentityReport(BaseModel):
    isometry: float
    star_then_w: float
    w_then_star: float
    adjointness: float


def identity_residuals(decomp: SpectralDecomposition, f: GridFunction, g: GridFunction | None = None) -> IdentityReport:
    """| ||W_+ f|| / ||f|| - 1 |, ||W_+ W_+^* u - P_c u|| / ||u|| on the image u = W_+ f,
    ||W_+^* W_+ f - f|| / ||f|| and
    |<W_+ f, g> - <f, W_+^* g>| / (||f|| ||g||).

    u is H-band-limited by construction, so P_c u is resolved on the k window even when f is not.
    """
    scale = f.norm()
    image = apply_wplus(decomp, f)
    pc = distorted_ft_adjoint(decomp.table, distorted_ft(decomp.table, image))
    g = f if g is None else g
    adjoint = abs(image.inner(g) - f.inner(apply_wplus_star(decomp, g))) / (scale * g.norm())
    return IdentityReport(
        isometry=abs(image.norm() / scale - 1.0),
        star_then_w=(apply_wplus(decomp, apply_wplus_star(decomp, image)) - pc).norm() / image.norm(),
        w_then_star=(apply_wplus_star(decomp, image) - f).norm() / scale,
        adjointness=adjoint,
    )


def intertwining_check(decomp: SpectralDecomposition, f: GridFunction, borel: Borel) -> float:
    """||borel(H) P_c f - W_+ borel(H_0) W_+^* f|| / ||f||, borel a function of k^2."""
    left = distorted_multiplier(decomp.table, f, borel)
    right = apply_wplus(decomp, free_multiplier(decomp.table, apply_wplus_star(decomp, f), borel))
    residual = (left - right).norm() / f.norm()
    logger.log("WAVEOP", f"Intertwining residual {residual:.2e}")
    return residual


def default_borels(t: float = 1.0) -> dict[str, Borel]:
    """The multipliers of the default intertwining study."""
    return {
        "one": lambda s: np.ones_like(s, dtype=complex),
        "propagator": lambda s: np.exp(-1j * t * s),
        "resolvent": lambda s: 1.0 / (s + 1.0),
        "sobolev": lambda s: np.sqrt(s + 1.0),
    }
