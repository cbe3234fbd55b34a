"""Convex hull and rotating-calipers minimum-area rectangle (the ``minAreaRect`` role)."""

import numpy as np

from app.core.errors import DegeneratePolygonError
from app.core.types import Polygon
from app.geometry.polygon import as_polygon

__all__ = ("convex_hull", "min_area_rect")


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> Polygon:
    """Monotone-chain hull without collinear points, clockwise on screen."""
    pts = sorted({(float(x), float(y)) for x, y in as_polygon(points)})
    if len(pts) < 3:
        raise DegeneratePolygonError(f"hull needs at least 3 distinct points, got {len(pts)}")

    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)

    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegeneratePolygonError("all points are collinear")
    return np.asarray(hull, dtype=np.float64)


def min_area_rect(points) -> Polygon:
    """
    Smallest-area enclosing rectangle of a point set.

    One side of the optimal rectangle is collinear with a hull edge, so every
    hull edge is tried as a caliper direction. The four corners come back
    clockwise on screen, starting from the top-most (then left-most) corner.
    """
    hull = convex_hull(points)
    edges = np.roll(hull, -1, axis=0) - hull
    directions = edges / np.linalg.norm(edges, axis=1)[:, None]

    best_area = np.inf
    best_corners = None
    for u in directions:
        n = np.array([-u[1], u[0]])
        pu = hull @ u
        pn = hull @ n
        area = (pu.max() - pu.min()) * (pn.max() - pn.min())
        if area < best_area - 1e-12:
            best_area = area
            best_corners = np.array(
                [
                    pu.min() * u + pn.min() * n,
                    pu.max() * u + pn.min() * n,
                    pu.max() * u + pn.max() * n,
                    pu.min() * u + pn.max() * n,
                ]
            )

    assert best_corners is not None
    start = min(range(4), key=lambda i: (round(best_corners[i, 1], 9), round(best_corners[i, 0], 9)))
    return np.roll(best_corners, -start, axis=0)
