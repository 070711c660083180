from program.spectral.decomposition import (  # noqa: F401
    DiscrepancyError,
    Projection,
    SpectralDecomposition,
    build_decomposition,
    continuous_packet,
    default_grids,
    orthonormality_residual,
    pc_project,
    pc_route_agreement,
    pc_two_wave,
    spectral_coverage,
)
from program.spectral.grids import GridFunction, SpatialGrid, WavenumberGrid  # noqa: F401
from program.spectral.transforms import (  # noqa: F401
    distorted_ft,
    distorted_ft_adjoint,
    fourier_transform,
    inverse_fourier_transform,
    unitary_ft,
    unitary_ft_adjoint,
    zero_energy_taper,
)
from program.spectral.waves import (  # noqa: F401
    DistortedWaveTable,
    build_distorted_waves,
    lippmann_schwinger_residual,
    psi_minus,
    psi_plus,
    source_agreement,
)
