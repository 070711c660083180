from program.scattering.asymptotics import (  # noqa: F401
    ResonantConfigurationError,
    high_energy_check,
    rt_hypothesis_check,
    tdot_asymptotics_check,
)
from program.scattering.bound_states import BoundState, bound_state_kappas, bound_states  # noqa: F401
from program.scattering.closed_forms import (  # noqa: F401
    double_delta_closed_form,
    single_delta_closed_form,
    square_barrier_transmission,
)
from program.scattering.coefficients import ScatteringData, default_k_grid, scattering_coeffs  # noqa: F401
from program.scattering.mixed import (  # noqa: F401
    MixedBoundState,
    StepSizeUnderflowError,
    mixed_bound_states,
    mixed_scattering,
)
from program.scattering.transfer import (  # noqa: F401
    PlaneWaveCoefficients,
    ZeroWavenumberError,
    plane_wave_coefficients,
    transfer_matrices,
    transfer_matrix_at,
)


def solve_scattering(spec, k_grid) -> ScatteringData:
    """Transfer matrices for pure delta potentials, the ODE path otherwise; bound states attached."""
    if spec.is_pure_delta:
        return scattering_coeffs(spec, k_grid).with_bound_states(bound_state_kappas(spec))
    kappas = [state.kappa for state in mixed_bound_states(spec)]
    return mixed_scattering(spec, k_grid).with_bound_states(kappas)


def any_bound_states(spec) -> list:
    """Bound states by the exact piecewise-exponential route when possible."""
    if spec.is_pure_delta:
        return bound_states(spec)
    return mixed_bound_states(spec)
