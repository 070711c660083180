"""deltascatter settings models"""
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, field_validator

from program.utils import get_version


class GridModel(BaseModel):
    x_max: float = 30.0
    dx: float = 0.05
    k_min: float = 1e-3
    k_max: float = 12.0
    dk: float | None = None  # None: pi / (4 * x_max)

    @field_validator("dx", "x_max", "k_max")
    def check_positive(cls, v):
        if v <= 0:
            raise ValueError("grid extents and spacings must be positive")
        return v


class PotentialModel(BaseModel):
    gamma: float = 1.6
    quad_abs_tolerance: float = 1e-10
    quad_rel_tolerance: float = 1e-8
    quad_limit: int = 200


class ScatteringModel(BaseModel):
    k_lo: float = 1e-3
    k_hi: float = 1e3
    k_nodes: int = 2048
    bound_state_samples: int = 1000
    derivative_step: float = 1e-4
    closed_form_tolerance: float = 1e-12
    unitarity_tolerance: float = 1e-10
    growth_tolerance: float = 0.05
    ode_rtol: float = 1e-10
    ode_atol: float = 1e-12
    max_workers: int = 1


class JostModel(BaseModel):
    quad_dx: float = 1e-3
    richardson_tolerance: float = 1e-4
    fixed_point_tolerance: float = 1e-10
    fixed_point_max_iter: int = 200
    aliasing_tolerance: float = 1e-4
    b1_k_max: float = 400.0
    b1_y_max: float = 8.0
    kn_terms: int = 6
    refinement_tolerance: float = 0.10


class SpectralModel(BaseModel):
    truncation_tolerance: float = 1e-10
    pc_discrepancy_tolerance: float = 1e-4
    orthonormality_tolerance: float = 1e-12


class WaveOpsModel(BaseModel):
    identity_tolerance: float = 1e-5
    adjoint_tolerance: float = 1e-8
    band_limit_tolerance: float = 1e-8
    family_size: int = 50
    # scale of the k = 0 taper on the test family; 0 disables it
    zero_energy_scale: float = 1.0
    family_stability_tolerance: float = 0.05
    p_values: list[float] = [1.05, 1.5, 2.0, 4.0]


class DynamicsModel(BaseModel):
    norm_tolerance: float = 1e-6
    decay_slope_window: tuple[float, float] = (-0.55, -0.45)
    decay_times: list[float] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 100.0]
    band_threshold: float = 1e-8


class NLSModel(BaseModel):
    sigma: float = 1.0
    sign: Literal["focusing", "defocusing"] = "defocusing"
    convention: Literal["standard", "printed"] = "standard"
    coupling: float = 1.0
    dt: float = 0.01
    t_final: float = 1.0
    mass_drift_tolerance: float = 1e-8
    beat_period_tolerance: float = 0.02
    balance_tolerance: float = 1e-8
    blow_up_factor: float = 10.0
    step_size_limit: float = 0.1

    @field_validator("sigma")
    def check_sigma(cls, v):
        if v <= 0:
            raise ValueError("sigma must be positive")
        return v


class OutputModel(BaseModel):
    directory: Path = Path("output")
    float_format: str = "%.12e"


class AppModel(BaseModel):
    version: str = get_version()
    debug: bool = False
    log: bool = False
    seed: int = 1234
    grid: GridModel = GridModel()
    potential: PotentialModel = PotentialModel()
    scattering: ScatteringModel = ScatteringModel()
    jost: JostModel = JostModel()
    spectral: SpectralModel = SpectralModel()
    waveops: WaveOpsModel = WaveOpsModel()
    dynamics: DynamicsModel = DynamicsModel()
    nls: NLSModel = NLSModel()
    output: OutputModel = OutputModel()
