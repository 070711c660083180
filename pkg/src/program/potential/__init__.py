from program.potential.loader import ConfigParseError, load_potential, parse_potential  # noqa: F401
from program.potential.models import (  # noqa: F401
    FREE,
    DeltaTerm,
    PotentialSpec,
    RegularPart,
    double_delta_spec,
    single_delta_spec,
)
from program.potential.norms import (  # noqa: F401
    DivergentIntegralError,
    gamma1,
    tail_integral,
    weighted_l1_norm,
)
from program.potential.validate import PotentialReport, PotentialValidationError, validate  # noqa: F401
