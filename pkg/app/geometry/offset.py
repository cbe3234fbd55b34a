"""
Miter offsetting: outward expansion of central regions and inward shrinking
of annotations.

Every vertex moves along the sum of the unit vectors pointing away from its two
neighbours, scaled by ``d`` over the sine of the angle between those edges, so each
offset edge stays parallel to its source edge at distance exactly d.
The sine is signed, positive at convex vertices of a clockwise polygon, which
flips the step at reflex vertices of concave outlines.
"""

import numpy as np

from app.core.config import settings
from app.core.errors import DegenerateAngleError, DegeneratePolygonError, ParameterError
from app.core.log import logger
from app.core.types import Polygon
from app.geometry.polygon import (
    as_polygon,
    ensure_clockwise,
    is_simple,
    perimeter,
    require_vertices,
    signed_area,
)

__all__ = (
    "expand_polygon",
    "inradius",
    "offset_distance_for_ratio",
    "shrink_polygon",
)


def _check_distance(d: float) -> float:
    d = float(d)
    if not np.isfinite(d) or d < 0:
        raise ParameterError(f"offset distance must be finite and >= 0, got {d}")
    return d


def _bisectors(poly: Polygon) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex sum of unit edge directions and the signed sine of the corner angle."""
    v1 = poly - np.roll(poly, 1, axis=0)
    v2 = poly - np.roll(poly, -1, axis=0)
    l1 = np.linalg.norm(v1, axis=1)
    l2 = np.linalg.norm(v2, axis=1)
    if np.any(l1 == 0.0):
        raise DegeneratePolygonError(f"repeated vertex at index {int(np.argmin(l1))}")
    n1 = v1 / l1[:, None]
    n2 = v2 / l2[:, None]
    sine = -(n1[:, 0] * n2[:, 1] - n1[:, 1] * n2[:, 0])
    return n1 + n2, sine


def _miter(cw: Polygon, d: float) -> Polygon:
    bisector, sine = _bisectors(cw)
    bad = np.flatnonzero(np.abs(sine) < settings.ANGLE_TOLERANCE)
    if bad.size:
        raise DegenerateAngleError(int(bad[0]), float(sine[bad[0]]))
    return cw + (d / sine)[:, None] * bisector


def _oriented(poly: Polygon) -> tuple[Polygon, bool]:
    cw = ensure_clockwise(poly)
    return cw, signed_area(poly) < 0


def expand_polygon(poly, d: float) -> Polygon:
    """
    Offset a simple polygon outward by ``d`` pixels with miter joins.

    The output keeps the input's vertex count and vertex order.

    Raises:
        DegenerateAngleError: a vertex is (nearly) collinear with its neighbours.
    """
    poly = as_polygon(poly)
    require_vertices(poly)
    d = _check_distance(d)
    if d == 0.0:
        return poly.copy()

    cw, flipped = _oriented(poly)
    out = _miter(cw, d)
    return out[::-1].copy() if flipped else out


def _offset_lines(cw: Polygon, d: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Direction, inward normal and offset constant ``m . x = c`` for every edge."""
    edge = np.roll(cw, -1, axis=0) - cw
    direction = edge / np.linalg.norm(edge, axis=1)[:, None]
    normal = np.column_stack([-direction[:, 1], direction[:, 0]])
    const = np.einsum("ij,ij->i", normal, cw) + d
    return direction, normal, const


def _inward_offset(cw: Polygon, d: float) -> Polygon | None:
    """Intersect consecutive offset lines, dropping edges that vanish, until the ring is consistent."""
    direction, normal, const = _offset_lines(cw, d)
    scale = max(float(np.ptp(cw, axis=0).max()), 1.0)
    active = list(range(len(cw)))

    while True:
        if len(active) < 3:
            return None

        vertices = []
        for k, edge in enumerate(active):
            before = active[k - 1]
            a = np.vstack([normal[before], normal[edge]])
            det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
            if abs(det) < 1e-12:
                return None
            vertices.append(np.linalg.solve(a, [const[before], const[edge]]))
        ring = np.asarray(vertices)

        along = np.einsum("ij,ij->i", np.roll(ring, -1, axis=0) - ring, direction[active])
        worst = int(np.argmin(along))
        if along[worst] > 1e-9 * scale:
            return ring
        del active[worst]


def shrink_polygon(poly, d: float) -> Polygon | None:
    """
    Offset a simple polygon inward by ``d`` pixels.

    Uses the same miter rule as :func:`expand_polygon` with a negated distance.
    Edges whose offset collapses are removed and their neighbours re-intersected.
    Returns ``None`` when the polygon collapses (``d`` reaches the inradius) or
    the result self-intersects.
    """
    poly = as_polygon(poly)
    require_vertices(poly)
    d = _check_distance(d)
    if d == 0.0:
        return poly.copy()

    cw, flipped = _oriented(poly)
    _miter(cw, d)  # angle validation only

    out = _inward_offset(cw, d)
    if out is None:
        logger.debug(f"shrink by {d:.3f}px collapsed a {len(cw)}-vertex polygon")
        return None
    if signed_area(out) <= 0 or not is_simple(out):
        logger.debug(f"shrink by {d:.3f}px produced an invalid ring; treating as collapsed")
        return None
    return out[::-1].copy() if flipped else out


def offset_distance_for_ratio(poly, r: float) -> float:
    """Offset distance ``Area * (1 - r^2) / Perimeter`` for shrink ratio ``r`` in ``(0, 1]``."""
    r = float(r)
    if not (0.0 < r <= 1.0):
        raise ParameterError(f"shrink ratio must lie in (0, 1], got {r}")
    per = perimeter(poly)
    if per == 0.0:
        raise DegeneratePolygonError("polygon has zero perimeter")
    return abs(signed_area(poly)) * (1.0 - r * r) / per


def inradius(poly, iterations: int = 60) -> float:
    """Largest inward offset that keeps a convex polygon non-empty (bisection on :func:`shrink_polygon`)."""
    poly = ensure_clockwise(poly)
    lo, hi = 0.0, 2.0 * signed_area(poly) / perimeter(poly)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if _inward_offset(poly, mid) is not None:
            lo = mid
        else:
            hi = mid
    return lo
