"""(H_0 + 1)^{-1} (H + 1) P_c computed around the wave operators and on the distorted side."""
from dataclasses import dataclass

from program.spectral.decomposition import SpectralDecomposition
from program.spectral.grids import GridFunction
from program.spectral.transforms import distorted_multiplier, free_multiplier
from program.utils.logging import logger
from program.waveops.operators import apply_wplus, apply_wplus_star


def _raise(s):
    return s + 1.0


def _lower(s):
    return 1.0 / (s + 1.0)


@dataclass(frozen=True)
class Sandwich:
    result: GridFunction
    # ||result|| / ||f||
    ratio: float
    # relative distance between the two routes
    route_discrepancy: float


def resolvent_sandwich(decomp: SpectralDecomposition, f: GridFunction) -> Sandwich:
    """(H_0+1)^{-1} W_+ (H_0+1) W_+^* f, checked against (H_0+1)^{-1} F_+^* (k^2+1) F_+ f."""
    table = decomp.table
    lifted = free_multiplier(table, apply_wplus_star(decomp, f), _raise)
    result = free_multiplier(table, apply_wplus(decomp, lifted), _lower)
    distorted = free_multiplier(table, distorted_multiplier(table, f, _raise), _lower)
    discrepancy = result.relative_distance(distorted)
    ratio = result.norm() / f.norm()
    logger.log("DYNAMICS", f"Resolvent sandwich ratio {ratio:.6f}, routes differ by {discrepancy:.2e}")
    return Sandwich(result, ratio, discrepancy)
