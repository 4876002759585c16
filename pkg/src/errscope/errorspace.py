"""2D error space for a model pair: zones, quadrants, distances, crown.

The space plots the paired errors (e1, e2) of two models on the same
instances. The diagonals y = x and y = -x split the plane into two
"hourglass" comparison zones; distance from the 2D median (Euclidean or
Mahalanobis) drives the percentile-proximity colormap and the median crown.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateDistribution, LengthMismatch, NonPositiveDefinite
from .metrics import ErrorVector

# Ridge kicks in when the sample covariance is singular or nearly so.
_COND_LIMIT = 1e12
_RIDGE_SCALE = 1e-9


class Zone(str, enum.Enum):
    A_BETTER = "a_better"
    B_BETTER = "b_better"
    TIE = "tie"


class Quadrant(str, enum.Enum):
    OVER_OVER = "over_over"
    OVER_UNDER = "over_under"
    UNDER_OVER = "under_over"
    UNDER_UNDER = "under_under"
    ON_AXIS = "on_axis"


@dataclass(frozen=True)
class ErrorSpacePoint:
    e1: float
    e2: float
    zone: Zone
    quadrant: Quadrant
    distance: float
    percentile: float

    def to_dict(self) -> dict:
        return {
            "e1": self.e1,
            "e2": self.e2,
            "zone": self.zone.value,
            "quadrant": self.quadrant.value,
            "distance": self.distance,
            "percentile": self.percentile,
        }


@dataclass(frozen=True)
class ErrorSpaceAnalysis:
    model_a: str
    model_b: str
    points: tuple[ErrorSpacePoint, ...]
    median2d: tuple[float, float]
    covariance: np.ndarray
    covariance_inverse: np.ndarray
    metric: str
    crown_threshold: float
    zone_counts: dict[str, int]
    quadrant_counts: dict[str, int]

    @property
    def n(self) -> int:
        return len(self.points)

    def coords(self) -> np.ndarray:
        return np.array([[p.e1, p.e2] for p in self.points])

    def distances(self) -> np.ndarray:
        return np.array([p.distance for p in self.points])

    def to_dict(self) -> dict:
        return {
            "model_a": self.model_a,
            "model_b": self.model_b,
            "metric": self.metric,
            "points": [p.to_dict() for p in self.points],
            "summary": {
                "n": self.n,
                "median2d": list(self.median2d),
                "covariance": [float(v) for v in self.covariance.ravel()],
                "crown_threshold": self.crown_threshold,
                "zone_counts": self.zone_counts,
                "quadrant_counts": self.quadrant_counts,
            },
        }


def classify_zone(e1: float, e2: float) -> Zone:
    """Which model has the smaller absolute error; diagonals are ties.

    Comparison is exact, no epsilon: points on y = x or y = -x tie.
    """
    a1, a2 = abs(e1), abs(e2)
    if a1 < a2:
        return Zone.A_BETTER
    if a1 > a2:
        return Zone.B_BETTER
    return Zone.TIE


def classify_quadrant(e1: float, e2: float) -> Quadrant:
    """Over/under-estimation sign pattern; exact zeros sit on an axis."""
    if e1 == 0.0 or e2 == 0.0:
        return Quadrant.ON_AXIS
    if e1 > 0.0:
        return Quadrant.OVER_OVER if e2 > 0.0 else Quadrant.OVER_UNDER
    return Quadrant.UNDER_OVER if e2 > 0.0 else Quadrant.UNDER_UNDER


def median2d(points) -> tuple[float, float]:
    """Componentwise median (same interpolation rule as the boxplots)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] < 1:
        raise DegenerateDistribution("median2d needs at least one point")
    return (float(np.median(pts[:, 0])), float(np.median(pts[:, 1])))


def covariance2(points) -> np.ndarray:
    """Sample covariance (1/(N-1), mean-centered) of a 2D point cloud."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] < 2:
        raise DegenerateDistribution("covariance needs at least two points")
    centered = pts - pts.mean(axis=0)
    return centered.T @ centered / (pts.shape[0] - 1)


def regularized_inverse(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert a 2x2 covariance, ridging the diagonal when near-singular.

    Returns (possibly ridged covariance, its inverse).
    """
    cov = np.asarray(cov, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.linalg.cond(cov)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        eps = _RIDGE_SCALE * max(cov[0, 0], cov[1, 1], 1.0)
        cov = cov + eps * np.eye(2)
    return cov, np.linalg.inv(cov)


def _check_spd(m: np.ndarray) -> None:
    if not np.allclose(m, m.T):
        raise NonPositiveDefinite("matrix is not symmetric")
    if np.any(np.linalg.eigvalsh(m) <= 0.0):
        raise NonPositiveDefinite("matrix has a non-positive eigenvalue")


def mahalanobis(p, center, cov_inv: np.ndarray) -> float:
    """sqrt((p-c)^T S^-1 (p-c)); Euclidean when S^-1 is the identity."""
    cov_inv = np.asarray(cov_inv, dtype=float)
    _check_spd(cov_inv)
    d = np.asarray(p, dtype=float) - np.asarray(center, dtype=float)
    return float(np.sqrt(d @ cov_inv @ d))


def mahalanobis_many(points: np.ndarray, center, cov_inv: np.ndarray) -> np.ndarray:
    """Vectorized Mahalanobis distances: one inversion, O(N) evaluations."""
    d = np.asarray(points, dtype=float) - np.asarray(center, dtype=float)
    return np.sqrt(np.einsum("ij,jk,ik->i", d, np.asarray(cov_inv, dtype=float), d))


def percentile_ranks(distances) -> np.ndarray:
    """Midrank percentile of each distance: (#less + 0.5 * #tied) / N."""
    d = np.asarray(distances, dtype=float)
    if d.size < 1:
        raise DegenerateDistribution("percentile_ranks needs at least one value")
    order = np.sort(d)
    less = np.searchsorted(order, d, side="left")
    tied = np.searchsorted(order, d, side="right") - less
    return (less + 0.5 * tied) / d.size


def crown_threshold(distances) -> float:
    """Median distance: the crown splits points into equal halves."""
    d = np.asarray(distances, dtype=float)
    if d.size < 1:
        raise DegenerateDistribution("crown_threshold needs at least one value")
    return float(np.median(d))


def analyze_pair(ea: ErrorVector, eb: ErrorVector, metric: str = "mahalanobis") -> ErrorSpaceAnalysis:
    """Full 2D error-space analysis of two error vectors.

    Distances are measured from the componentwise median; the Mahalanobis
    covariance is the mean-centered sample covariance of the whole cloud.
    """
    if metric not in ("euclidean", "mahalanobis"):
        raise ValueError(f"metric must be 'euclidean' or 'mahalanobis', got {metric!r}")
    if ea.n != eb.n:
        raise LengthMismatch(f"{ea.n} vs {eb.n} errors")
    pts = np.column_stack([ea.errors, eb.errors])
    n = pts.shape[0]
    if metric == "mahalanobis" and n < 3:
        raise DegenerateDistribution("mahalanobis analysis needs at least 3 points")

    center = median2d(pts)
    if n >= 2:
        cov, cov_inv = regularized_inverse(covariance2(pts))
    else:
        cov = np.eye(2)
        cov_inv = np.eye(2)

    if metric == "euclidean":
        dist = np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1])
    else:
        dist = mahalanobis_many(pts, center, cov_inv)

    pct = percentile_ranks(dist)
    zone_counts = {z.value: 0 for z in Zone}
    quadrant_counts = {q.value: 0 for q in Quadrant}
    points = []
    for i in range(n):
        e1, e2 = float(pts[i, 0]), float(pts[i, 1])
        zone = classify_zone(e1, e2)
        quad = classify_quadrant(e1, e2)
        zone_counts[zone.value] += 1
        quadrant_counts[quad.value] += 1
        points.append(
            ErrorSpacePoint(
                e1=e1, e2=e2, zone=zone, quadrant=quad,
                distance=float(dist[i]), percentile=float(pct[i]),
            )
        )

    return ErrorSpaceAnalysis(
        model_a=ea.model_name,
        model_b=eb.model_name,
        points=tuple(points),
        median2d=center,
        covariance=cov,
        covariance_inverse=cov_inv,
        metric=metric,
        crown_threshold=crown_threshold(dist),
        zone_counts=zone_counts,
        quadrant_counts=quadrant_counts,
    )
