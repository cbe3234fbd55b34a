"""
Random outlines for scenes and property checks.
"""

import numpy as np

from app.core.errors import ParameterError
from app.core.types import Polygon
from app.geometry.polygon import ensure_clockwise, interior_angles

__all__ = ("arc_band", "random_convex_polygon", "rotate")

MAX_ATTEMPTS = 1000


def rotate(poly: Polygon, angle: float, center=(0.0, 0.0)) -> Polygon:
    c, s = np.cos(angle), np.sin(angle)
    center = np.asarray(center, dtype=np.float64)
    return (poly - center) @ np.array([[c, s], [-s, c]]) + center


def random_convex_polygon(
    rng: np.random.Generator,
    n_vertices: int | None = None,
    min_angle_deg: float = 20.0,
    center=(32.0, 32.0),
    radii=(16.0, 16.0),
    min_edge: float = 1.0,
    rotation: float = 0.0,
) -> Polygon:
    """
    Convex polygon inscribed in an ellipse, clockwise on screen.

    Vertices sit at sorted random angles; draws with a too-sharp interior angle
    or a too-short edge are rejected.
    """
    n = int(rng.integers(3, 9)) if n_vertices is None else n_vertices
    if n < 3:
        raise ParameterError(f"a polygon needs at least 3 vertices, got {n}")
    min_angle = np.deg2rad(min_angle_deg)

    for _ in range(MAX_ATTEMPTS):
        theta = np.sort(rng.uniform(0.0, 2 * np.pi, n))
        pts = np.column_stack([radii[0] * np.cos(theta), radii[1] * np.sin(theta)])
        pts = rotate(pts, rotation) + np.asarray(center, dtype=np.float64)
        edges = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        if edges.min() < min_edge:
            continue
        poly = ensure_clockwise(pts)
        angles = interior_angles(poly)
        if angles.min() >= min_angle and angles.max() < np.pi:
            return poly
    raise ParameterError(f"no {n}-gon with interior angles >= {min_angle_deg} deg after {MAX_ATTEMPTS} draws")


def arc_band(center, radius: float, thickness: float, span: float, points_per_side: int = 7) -> Polygon:
    """
    Curved text band: an annulus sector outlined by ``2 * points_per_side`` vertices.

    The band bends around ``center``; its outer arc has ``radius`` and spans
    ``[-span, span]`` radians around the upward direction.
    """
    phi = np.linspace(-span, span, points_per_side)
    cx, cy = center
    outer = np.column_stack([cx + radius * np.sin(phi), cy - radius * np.cos(phi)])
    inner_r = radius - thickness
    inner = np.column_stack([cx + inner_r * np.sin(phi[::-1]), cy - inner_r * np.cos(phi[::-1])])
    return ensure_clockwise(np.vstack([outer, inner]))
