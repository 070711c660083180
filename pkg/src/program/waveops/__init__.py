from program.waveops.harmonic import (  # noqa: F401
    FrequencyCutoff,
    frequency_split,
    hilbert_transform,
    parity,
    smoothstep5,
    spatial_cutoff,
    zero_energy_filter,
)
from program.waveops.kernels import KernelOperator, YoungChainReport, sj_kernel, young_chain, young_constant  # noqa: F401
from program.waveops.operators import (  # noqa: F401
    IdentityReport,
    apply_wminus,
    apply_wminus_star,
    apply_wplus,
    apply_wplus_star,
    default_borels,
    identity_residuals,
    intertwining_check,
)
from program.waveops.reassembly import Reassembly, reassemble_wplus  # noqa: F401
from program.waveops.sobolev import (  # noqa: F401
    SobolevReport,
    StabilityReport,
    family_stability,
    seeded_family,
    sobolev_norm,
    sobolev_ratio,
)
