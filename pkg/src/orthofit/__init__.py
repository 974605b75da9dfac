"""orthofit: fit lines to d-dimensional point clouds by orthogonal distance.

The fitted line minimizes the sum of squared orthogonal (perpendicular)
distances to the points, so the answer does not depend on which coordinate
is treated as dependent and is equivariant under rotations and translations
of the data. See fit_tls_line for the main entry point and the cli module
for the command-line front end.
"""

from .errors import (
    DegenerateInput,
    DimensionMismatch,
    NoConvergence,
    NotCentered,
    NotSymmetric,
    NotUnit,
    OrthofitError,
    ParseError,
    RankDeficient,
    UnsupportedDimension,
    ZeroVector,
)
from .fit import (
    ExplicitFitResult,
    LineFitResult,
    fit_lse_explicit,
    fit_tls_line,
    line_from_explicit,
    total_orthogonal_distance,
    vertical_residual_sq,
)
from .geometry import (
    ParametricLine,
    PointSet,
    canonical_direction,
    center,
    centroid,
    line_distances_sq,
    point_line_distance_sq,
)
from .oracle import GridSearchResult, cubic_eigenvalues, grid_search_direction
from .scatter import ScatterSummary, accumulate_scatter, cross_matrix, rejection_matrix
from .solver import (
    EigenSolution,
    SolverConfig,
    dominant_eigenpair,
    finite_diff_gradient,
    objective_gradient,
    quadratic_objective,
    stationarity_forms,
    stationarity_residual,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateInput",
    "DimensionMismatch",
    "EigenSolution",
    "ExplicitFitResult",
    "GridSearchResult",
    "LineFitResult",
    "NoConvergence",
    "NotCentered",
    "NotSymmetric",
    "NotUnit",
    "OrthofitError",
    "ParametricLine",
    "ParseError",
    "PointSet",
    "RankDeficient",
    "ScatterSummary",
    "SolverConfig",
    "UnsupportedDimension",
    "ZeroVector",
    "accumulate_scatter",
    "canonical_direction",
    "center",
    "centroid",
    "cross_matrix",
    "cubic_eigenvalues",
    "dominant_eigenpair",
    "finite_diff_gradient",
    "fit_lse_explicit",
    "fit_tls_line",
    "grid_search_direction",
    "line_distances_sq",
    "line_from_explicit",
    "objective_gradient",
    "point_line_distance_sq",
    "quadratic_objective",
    "rejection_matrix",
    "stationarity_forms",
    "stationarity_residual",
    "total_orthogonal_distance",
    "vertical_residual_sq",
]
