from program.jost.bounds import (  # noqa: F401
    KernelBoundReport,
    MBoundReport,
    RefinementReport,
    refinement_report,
    verify_kernel_bounds,
    verify_m_bounds,
)
from program.jost.kernel import B1Kernel, b1_from_m1, b1_k_grid, b1_kernel, synthesize_m1  # noqa: F401
from program.jost.series import KnSeries, kn_series  # noqa: F401
from program.jost.volterra import (  # noqa: F401
    GridTooCoarseError,
    JostSolution,
    NonConvergenceError,
    dk_kernel,
    fixed_point_m1,
    solve_jost,
    solve_m1,
    solve_m2,
)
