"""(p,q)-Bernstein-Stancu operators with exact-rational cross-checks."""

__version__ = "0.1.0"

from .bernstein_stancu import (  # noqa: E402
    BasisVector,
    DefectVanishesError,
    MomentSet,
    NodeSet,
    OperatorConfig,
    StancuShift,
    apply,
    apply_grid,
    basis_literal,
    basis_matrix,
    basis_vector,
    central_moment_closed,
    central_moment_direct,
    moment_closed,
    moment_direct,
    moments,
    nodes,
    original_operator_defect,
    original_operator_weights,
)
from .functions import TestFunction, parse_function  # noqa: E402
from .korovkin import (  # noqa: E402
    ConvergenceReport,
    ParameterSchedule,
    constant_schedule,
    default_schedule,
    korovkin_sweep,
    modulus_of_continuity,
    popoviciu_bound,
    power_schedule,
    sup_error,
)
from .pq_core import (  # noqa: E402
    PQParams,
    gaussian_binomial,
    pq_binomial,
    pq_factorial,
    pq_integer,
    pq_integer_by_cases,
    triangular_power,
)
from .scalar import EXACT, FLOAT  # noqa: E402
