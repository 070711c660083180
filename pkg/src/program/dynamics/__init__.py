from program.dynamics.linear import (  # noqa: F401
    DecayReport,
    EvolutionTrace,
    dispersive_decay_study,
    evolve_linear,
    linear_trace,
    well_masses,
)
from program.dynamics.nls import (  # noqa: F401
    BlowUpError,
    ConvergenceReport,
    DoubleWell,
    DoubleWellReport,
    NLSConfig,
    convergence_order,
    double_well_demo,
    grid_hamiltonian,
    mass_drift,
    nls_solve,
    oscillation_period,
)
from program.dynamics.sandwich import Sandwich, resolvent_sandwich  # noqa: F401
