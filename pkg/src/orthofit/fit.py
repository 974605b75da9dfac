"""High-level fitters.

fit_tls_line is the main entry point: it fits a line minimizing the summed
squared orthogonal distances (total least squares). fit_lse_explicit is the
classical baseline that minimizes vertical residuals of an explicit form
y = w . x + b; it exists so the two can be compared on the same data, where
the orthogonal fit is never worse and is often much better once the data is
steep or rotated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, RankDeficient
from .geometry import (
    ParametricLine,
    PointSet,
    _readonly,
    center,
    line_distances_sq,
)
from .scatter import accumulate_scatter
from .solver import EigenSolution, SolverConfig, dominant_eigenpair

# A pivot below this fraction of its row's scale counts as zero.
PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class LineFitResult:
    """Outcome of an orthogonal-distance line fit.

    Attributes:
        line: fitted line; anchor is the cloud centroid.
        total_sq_distance: sum of squared orthogonal distances, accumulated
            from the per-point values in input order.
        per_point_sq: squared orthogonal distance of each input point.
        eigen: the eigensolution behind the fit (spectrum, ambiguity flag).
        n_points: number of points fitted.
    """

    line: ParametricLine
    total_sq_distance: float
    per_point_sq: np.ndarray
    eigen: EigenSolution
    n_points: int

    def __post_init__(self):
        object.__setattr__(
            self, "per_point_sq", _readonly(np.asarray(self.per_point_sq, dtype=np.float64))
        )


@dataclass(frozen=True)
class ExplicitFitResult:
    """Outcome of a classical explicit-form fit y = w . x + b.

    The dependent coordinate is points[:, dependent_col]; the remaining
    columns, in their original order, are the independent coordinates that
    w applies to.

    Attributes:
        coefficients: w, one weight per independent coordinate.
        offset: b.
        residual_sq: sum of squared vertical residuals (along the dependent
            axis only).
        dependent_col: resolved index of the dependent coordinate.
        dim: dimension of the input points.
    """

    coefficients: np.ndarray
    offset: float
    residual_sq: float
    dependent_col: int
    dim: int

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _readonly(np.asarray(self.coefficients, dtype=np.float64))
        )


def fit_tls_line(points: PointSet, config: SolverConfig | None = None) -> LineFitResult:
    """Fit a line minimizing the summed squared orthogonal distances.

    Centers the cloud on its centroid, accumulates the scatter matrix, and
    takes the dominant eigenvector as the direction; the optimal line always
    passes through the centroid, which becomes the anchor. The reported
    total is the sum of per-point squared rejection norms rather than the
    algebraically equal difference of large aggregates, so collinear data
    comes out at the rounding floor instead of cancellation noise.

    Raises:
        DegenerateInput: if all points coincide.
        NoConvergence: if the eigensolver fails to converge (propagated).
    """
    centered, centroid_vec = center(points)
    summary = accumulate_scatter(centered)
    eigen = dominant_eigenpair(summary.scatter, config)
    line = ParametricLine(anchor=centroid_vec, direction=eigen.direction)
    per_point = line_distances_sq(points, line)
    total = 0.0
    for value in per_point:
        total += float(value)
    return LineFitResult(
        line=line,
        total_sq_distance=total,
        per_point_sq=per_point,
        eigen=eigen,
        n_points=len(points),
    )


def total_orthogonal_distance(points: PointSet, line: ParametricLine) -> float:
    """Summed squared orthogonal distance from a cloud to an arbitrary line.

    For the fitted line this reproduces LineFitResult.total_sq_distance; for
    any other line it can only be larger (up to rounding).
    """
    total = 0.0
    for value in line_distances_sq(points, line):
        total += float(value)
    return total


def _solve_gaussian(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a small dense system by Gaussian elimination, partial pivoting.

    Raises:
        RankDeficient: when the best available pivot falls below PIVOT_RTOL
            times its row's original scale.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    b = np.array(rhs, dtype=np.float64, copy=True)
    m = a.shape[0]
    row_scale = np.max(np.abs(a), axis=1)

    for col in range(m):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        scale = max(float(row_scale[pivot_row]), np.finfo(np.float64).tiny)
        if abs(a[pivot_row, col]) <= PIVOT_RTOL * scale:
            raise RankDeficient(
                f"pivot {a[pivot_row, col]:g} in column {col} is negligible "
                f"against row scale {scale:g}"
            )
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            b[[col, pivot_row]] = b[[pivot_row, col]]
            row_scale[[col, pivot_row]] = row_scale[[pivot_row, col]]
        for row in range(col + 1, m):
            factor = a[row, col] / a[col, col]
            if factor != 0.0:
                a[row, col:] -= factor * a[col, col:]
                b[row] -= factor * b[col]

    x = np.zeros(m, dtype=np.float64)
    for row in range(m - 1, -1, -1):
        x[row] = (b[row] - float(a[row, row + 1 :] @ x[row + 1 :])) / a[row, row]
    return x


def fit_lse_explicit(points: PointSet, dependent_col: int = -1) -> ExplicitFitResult:
    """Classical least squares for the explicit form y = w . x + b.

    Builds the normal equations for the design [independent coords | 1] and
    solves them by Gaussian elimination with partial pivoting. Minimizes
    only the vertical residual along the dependent axis, so it is not
    rotation invariant and degrades on steep data; that contrast with
    fit_tls_line is the point of keeping it around.

    Args:
        points: the cloud; needs at least dim points for a full-rank system.
        dependent_col: which coordinate plays the role of y. Negative
            indices count from the end; the default is the last column.

    Raises:
        RankDeficient: if n < dim, or the normal matrix is singular (for
            example when all independent coordinates coincide, i.e. a
            vertical line).
        DimensionMismatch: if dependent_col is out of range.
    """
    n, d = points.points.shape
    if not (-d <= dependent_col < d):
        raise DimensionMismatch(
            f"dependent_col {dependent_col} out of range for dimension {d}"
        )
    dep = dependent_col % d
    if n < d:
        raise RankDeficient(f"need at least {d} points for an explicit fit, got {n}")

    keep = [j for j in range(d) if j != dep]
    design = np.hstack([points.points[:, keep], np.ones((n, 1))])
    y = points.points[:, dep]
    normal = design.T @ design
    rhs = design.T @ y
    w = _solve_gaussian(normal, rhs)

    residuals = design @ w - y
    residual_sq = 0.0
    for r in residuals:
        residual_sq += float(r) * float(r)
    return ExplicitFitResult(
        coefficients=w[:-1],
        offset=float(w[-1]),
        residual_sq=residual_sq,
        dependent_col=dep,
        dim=d,
    )


def line_from_explicit(result: ExplicitFitResult) -> ParametricLine:
    """Convert an explicit fit to a parametric line for distance comparison.

    The explicit graph y = w . x + b is a line only when traversed along a
    single direction; we take the direction whose independent part is the
    unit vector along w (the graph's steepest traversal), which in two
    dimensions reproduces the classical fitted line exactly. When w is zero
    the graph is flat and the first independent axis is used. The anchor is
    the graph point at x = 0.
    """
    dep = result.dependent_col
    keep = [j for j in range(result.dim) if j != dep]
    w = result.coefficients
    wnorm = float(np.linalg.norm(w))
    if wnorm == 0.0:
        u = np.zeros(len(keep))
        u[0] = 1.0
    else:
        u = w / wnorm

    direction = np.zeros(result.dim)
    direction[keep] = u
    direction[dep] = float(w @ u)
    anchor = np.zeros(result.dim)
    anchor[dep] = result.offset
    return ParametricLine(anchor=anchor, direction=direction)


def vertical_residual_sq(
    points: PointSet, line: ParametricLine, dependent_col: int = -1
) -> float | None:
    """Summed squared residual along the dependent axis for any line.

    Each point is matched to the line parameter that best reproduces its
    independent coordinates; the residual is then the gap in the dependent
    coordinate alone. For a two-dimensional non-vertical line this is the
    classical vertical distance. Returns None when the line's independent
    part is zero (a vertical line predicts nothing).
    """
    d = points.dim
    if line.dim != d:
        raise DimensionMismatch(
            f"points have dimension {d}, line has dimension {line.dim}"
        )
    if not (-d <= dependent_col < d):
        raise DimensionMismatch(
            f"dependent_col {dependent_col} out of range for dimension {d}"
        )
    dep = dependent_col % d
    keep = [j for j in range(d) if j != dep]

    s_ind = line.direction[keep]
    denom = float(s_ind @ s_ind)
    if denom == 0.0:
        return None
    offsets = points.points[:, keep] - line.anchor[keep]
    t = (offsets @ s_ind) / denom
    predicted = line.anchor[dep] + t * line.direction[dep]
    gaps = points.points[:, dep] - predicted
    total = 0.0
    for g in gaps:
        total += float(g) * float(g)
    return total
