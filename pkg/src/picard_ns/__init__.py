"""Two-step Picard iteration for the forced 2-D Navier-Stokes Cauchy problem."""

__version__ = "0.1.0"

from .convergence import (  # noqa: E402
    BorderPoint,
    SweepRecord,
    border_mu,
    convergence_predicate,
    dot_set_mu,
    sample_set,
)
from .picard import (  # noqa: E402
    IterationResult,
    ProfileSample,
    VelocityHistory,
    extract_profiles,
    first_iterate,
    run_iteration,
    second_increment,
    stokes_solve,
)
from .spectral import (  # noqa: E402
    ForceParams,
    GridSpec,
    SolverError,
    TimeGrid,
    VelocityField,
    convective_term,
    evaluate_force,
    leray_project,
    transform_forward,
    transform_inverse,
)
