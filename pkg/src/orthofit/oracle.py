"""Independent cross-checks for the fitter.

Two deliberately different routes to the same answers live here:

* grid_search_direction scans a dense grid of candidate directions and
  evaluates the objective directly, with no eigensolver involved.
* cubic_eigenvalues solves the 3x3 characteristic polynomial in closed
  trigonometric form, with no iteration involved.

Both are slower or narrower than the production path on purpose; they exist
so the fitter can be validated against something that shares none of its
code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, UnsupportedDimension
from .geometry import PointSet, _readonly, canonical_direction, center
from .solver import _check_symmetric

_CHUNK = 16384


@dataclass(frozen=True)
class GridSearchResult:
    """Best direction found by brute-force scanning.

    Attributes:
        best_direction: sign-canonicalized unit vector of the best grid
            node. Exact ties are broken toward the lexicographically
            smallest raw grid vector, so results are deterministic.
        best_sq_distance: objective value at that node, clamped at zero.
        resolution_deg: grid spacing that was used.
        evaluated: number of candidate directions scanned.
    """

    best_direction: np.ndarray
    best_sq_distance: float
    resolution_deg: float
    evaluated: int

    def __post_init__(self):
        object.__setattr__(
            self, "best_direction", _readonly(np.asarray(self.best_direction, dtype=np.float64))
        )


def _grid_directions(dim: int, resolution_deg: float) -> np.ndarray:
    if dim == 2:
        theta = np.deg2rad(np.arange(0.0, 180.0, resolution_deg))
        return np.column_stack([np.cos(theta), np.sin(theta)])
    # Hemisphere: polar angle from the +z pole down to the equator,
    # inclusive of the equator when the resolution divides 90 evenly.
    polar = np.deg2rad(np.arange(0.0, 90.0 + 1e-9, resolution_deg))
    azimuth = np.deg2rad(np.arange(0.0, 360.0, resolution_deg))
    pol, az = np.meshgrid(polar, azimuth, indexing="ij")
    sin_pol = np.sin(pol).ravel()
    return np.column_stack(
        [sin_pol * np.cos(az).ravel(), sin_pol * np.sin(az).ravel(), np.cos(pol).ravel()]
    )


def grid_search_direction(points: PointSet, resolution_deg: float) -> GridSearchResult:
    """Scan directions on a dense angular grid, minimizing the objective.

    Covers a half-circle (2-d) or a hemisphere (3-d); opposite directions
    describe the same line, so scanning half the sphere is enough. The
    objective for each candidate s is sum |y|^2 - sum (y . s)^2 over the
    centered cloud, evaluated in bulk. The returned value quantizes the true
    optimum: it can exceed it by roughly (lam1 - lam2) sin^2(delta) for a
    grid offset delta of at most about resolution_deg / sqrt(2).

    Args:
        points: the cloud; centered internally.
        resolution_deg: grid spacing in degrees, in (0, 10].

    Raises:
        UnsupportedDimension: for clouds that are not 2- or 3-dimensional.
        ValueError: for a resolution outside (0, 10].
    """
    if points.dim not in (2, 3):
        raise UnsupportedDimension(
            f"grid search covers dimensions 2 and 3, got {points.dim}"
        )
    if not (0.0 < resolution_deg <= 10.0):
        raise ValueError(f"resolution_deg must be in (0, 10], got {resolution_deg}")

    centered, _ = center(points)
    y = centered.points
    total_sq = float(np.einsum("ij,ij->", y, y))
    directions = _grid_directions(points.dim, resolution_deg)

    best_value = math.inf
    best_raw: tuple[float, ...] | None = None
    for start in range(0, directions.shape[0], _CHUNK):
        chunk = directions[start : start + _CHUNK]
        proj = y @ chunk.T
        values = total_sq - np.einsum("ij,ij->j", proj, proj)
        local_min = float(values.min())
        if local_min > best_value:
            continue
        candidates = [tuple(row) for row in chunk[values == local_min]]
        if local_min < best_value:
            best_value = local_min
            best_raw = min(candidates)
        else:
            best_raw = min(min(candidates), best_raw)

    assert best_raw is not None
    return GridSearchResult(
        best_direction=canonical_direction(np.array(best_raw)),
        best_sq_distance=max(best_value, 0.0),
        resolution_deg=resolution_deg,
        evaluated=directions.shape[0],
    )


def _det3(m: np.ndarray) -> float:
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def cubic_eigenvalues(matrix) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 matrix in closed form, descending.

    Solves the characteristic cubic through the standard trigonometric
    substitution: shift by the mean eigenvalue, scale by the deviation
    magnitude, and read the three roots off a third-angle cosine. No
    iteration, no factorization; this is the independent check for the
    Jacobi solver's spectrum.

    Raises:
        NotSymmetric: if the matrix is not symmetric.
        DimensionMismatch: if it is not 3x3.
    """
    a = _check_symmetric(matrix)
    if a.shape != (3, 3):
        raise DimensionMismatch(f"cubic_eigenvalues needs a 3x3 matrix, got {a.shape}")

    off_sq = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
    if off_sq == 0.0:
        return np.sort(np.diag(a))[::-1].copy()

    q = float(np.trace(a)) / 3.0
    p2 = (a[0, 0] - q) ** 2 + (a[1, 1] - q) ** 2 + (a[2, 2] - q) ** 2 + 2.0 * off_sq
    p = math.sqrt(p2 / 6.0)
    b = (a - q * np.eye(3)) / p
    r = _det3(b) / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0

    lam1 = q + 2.0 * p * math.cos(phi)
    lam3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    lam2 = 3.0 * q - lam1 - lam3
    return np.sort(np.array([lam1, lam2, lam3]))[::-1].copy()
