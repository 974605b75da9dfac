"""Points, parametric lines, centering, and orthogonal point-to-line distance.

All vectors are float64 numpy arrays. A line is stored in parametric form
(anchor point plus unit direction); the direction's sign is canonicalized so
that equality comparisons between fits are meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DimensionMismatch, ZeroVector

# A component must exceed this magnitude to anchor the canonical sign choice.
SIGN_EPS = 1e-12


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _as_vector(x, name: str = "vector") -> np.ndarray:
    v = np.array(x, dtype=np.float64, copy=True)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite values")
    return v


def canonical_direction(v) -> np.ndarray:
    """Normalize a direction vector and fix its sign.

    The returned vector has unit Euclidean norm and its first component with
    magnitude above SIGN_EPS is positive. Both v and -v map to the same
    output, so directions can be compared directly.

    Raises:
        ZeroVector: if v has zero norm.
    """
    v = _as_vector(v, "direction")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ZeroVector("direction has zero length")
    unit = v / norm
    for component in unit:
        if abs(component) > SIGN_EPS:
            if component < 0.0:
                unit = -unit
            break
    return unit


@dataclass(frozen=True)
class PointSet:
    """An immutable (n, d) cloud of points in d-dimensional space.

    Requires at least two points and at least two coordinates per point;
    a lone point (or a 1-d "cloud") does not determine a line problem.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True, order="C")
        if pts.ndim != 2:
            raise DimensionMismatch(f"points must be a 2-d array, got shape {pts.shape}")
        n, d = pts.shape
        if n < 2:
            raise DegenerateInput(f"need at least 2 points, got {n}")
        if d < 2:
            raise DimensionMismatch(f"points must have dimension >= 2, got {d}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite values")
        object.__setattr__(self, "points", _readonly(pts))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class ParametricLine:
    """A line given by an anchor point and a unit direction.

    The direction is normalized and sign-canonicalized on construction, so
    two ParametricLine values describing the same oriented geometry compare
    equal component-by-component.

    Raises:
        ZeroVector: if the direction has zero norm.
        DimensionMismatch: if anchor and direction lengths differ.
    """

    anchor: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        anchor = _as_vector(self.anchor, "anchor")
        direction = canonical_direction(self.direction)
        if anchor.shape != direction.shape:
            raise DimensionMismatch(
                f"anchor has dimension {anchor.shape[0]}, "
                f"direction has dimension {direction.shape[0]}"
            )
        object.__setattr__(self, "anchor", _readonly(anchor))
        object.__setattr__(self, "direction", _readonly(direction))

    @property
    def dim(self) -> int:
        return self.anchor.shape[0]

    def point_at(self, t: float) -> np.ndarray:
        """Point on the line at parameter t."""
        return self.anchor + t * self.direction


def centroid(points: PointSet) -> np.ndarray:
    """Arithmetic mean of the points, accumulated in input order.

    The accumulation order is fixed (a plain left-to-right sum) so the result
    is reproducible bit for bit across runs for identical input.
    """
    total = np.zeros(points.dim, dtype=np.float64)
    for row in points.points:
        total += row
    return total / len(points)


def center(points: PointSet) -> tuple[PointSet, np.ndarray]:
    """Shift a point set so its centroid is at the origin.

    Returns:
        (centered, c): the shifted point set and the centroid that was
        subtracted, so callers can translate results back.
    """
    c = centroid(points)
    return PointSet(points.points - c), c


def point_line_distance_sq(x, line: ParametricLine) -> float:
    """Squared orthogonal distance from a point to a line.

    Computed as the squared norm of the rejection y - (y.s)s of the offset
    y = x - anchor from the unit direction s. For unit s this equals
    |y|^2 - (y.s)^2, but the rejection form is evaluated without the
    subtraction of two nearly equal quantities, so points lying close to the
    line come out with full relative accuracy instead of cancellation noise.

    Raises:
        DimensionMismatch: if the point dimension differs from the line's.
    """
    p = _as_vector(x, "point")
    if p.shape != line.anchor.shape:
        raise DimensionMismatch(
            f"point has dimension {p.shape[0]}, line has dimension {line.dim}"
        )
    y = p - line.anchor
    r = y - (y @ line.direction) * line.direction
    return float(r @ r)


def line_distances_sq(points: PointSet, line: ParametricLine) -> np.ndarray:
    """Squared orthogonal distance from each point to the line.

    Vectorized over the rows of the point set; entries agree with
    point_line_distance_sq on each row up to rounding in the dot products.
    """
    if points.dim != line.dim:
        raise DimensionMismatch(
            f"points have dimension {points.dim}, line has dimension {line.dim}"
        )
    y = points.points - line.anchor
    proj = y @ line.direction
    r = y - proj[:, None] * line.direction
    return np.einsum("ij,ij->i", r, r)
