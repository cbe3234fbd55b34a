"""
Polygon primitives.

Polygons are ``(N, 2)`` float64 arrays of ``(x, y)`` image coordinates with
y pointing down. Positive shoelace sum means clockwise on screen.
"""

import numpy as np

from app.core.config import settings
from app.core.errors import DegeneratePolygonError, ParameterError
from app.core.types import Polygon

__all__ = (
    "approximate_polygon",
    "as_polygon",
    "clip_polygon_to_bounds",
    "distance_to_polygon",
    "ensure_clockwise",
    "interior_angles",
    "is_flat",
    "is_simple",
    "perimeter",
    "points_in_polygon",
    "require_vertices",
    "segment_distances",
    "signed_area",
    "simplify_polygon",
)


def as_polygon(points) -> Polygon:
    """Coerce a point sequence into an ``(N, 2)`` float64 array of finite values."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParameterError(f"expected an (N, 2) point array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("point coordinates must be finite")
    return arr


def require_vertices(poly: Polygon, minimum: int = 3) -> None:
    if len(poly) < minimum:
        raise DegeneratePolygonError(f"polygon needs at least {minimum} vertices, got {len(poly)}")


def _area_tolerance(poly: Polygon) -> float:
    extent = float(np.ptp(poly, axis=0).max()) if len(poly) else 0.0
    return 1e-12 * max(extent, 1.0) ** 2


def signed_area(poly) -> float:
    """Half the shoelace sum; positive for clockwise-on-screen vertex order."""
    poly = as_polygon(poly)
    require_vertices(poly)
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def is_flat(poly) -> bool:
    """True when all vertices lie on one line, so the outline encloses nothing."""
    poly = as_polygon(poly)
    if len(poly) < 3:
        return True
    extent = float(np.ptp(poly, axis=0).max())
    spread = np.linalg.svd(poly - poly.mean(axis=0), compute_uv=False)
    return float(spread[-1]) <= settings.EDGE_TOLERANCE * max(extent, 1.0)


def perimeter(poly) -> float:
    poly = as_polygon(poly)
    require_vertices(poly)
    return float(np.linalg.norm(np.roll(poly, -1, axis=0) - poly, axis=1).sum())


def ensure_clockwise(poly) -> Polygon:
    """Return the polygon with positive signed area, reversing the vertex order if needed."""
    poly = as_polygon(poly)
    area = signed_area(poly)
    if abs(area) <= _area_tolerance(poly):
        raise DegeneratePolygonError("polygon has zero area")
    if area < 0:
        return poly[::-1].copy()
    return poly.copy()


def interior_angles(poly) -> np.ndarray:
    """Interior angle at every vertex in radians, in ``(0, 2π)``; reflex vertices exceed π."""
    poly = ensure_clockwise(poly)
    to_prev = np.roll(poly, 1, axis=0) - poly
    to_next = np.roll(poly, -1, axis=0) - poly
    cross = to_prev[:, 0] * to_next[:, 1] - to_prev[:, 1] * to_next[:, 0]
    dot = np.einsum("ij,ij->i", to_prev, to_next)
    return np.mod(np.arctan2(-cross, dot), 2 * np.pi)


def points_in_polygon(points, poly, edge_tolerance: float | None = None) -> np.ndarray:
    """
    Even-odd membership test for many points at once.

    A point lying on an edge (within ``edge_tolerance``) counts as inside, so
    degenerate polygons still own the points on their outline.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    poly = as_polygon(poly)
    tol = settings.EDGE_TOLERANCE if edge_tolerance is None else edge_tolerance
    px, py = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    on_edge = np.zeros(len(pts), dtype=bool)
    if len(poly) == 0:
        return inside

    for a, b in zip(poly, np.roll(poly, -1, axis=0), strict=True):
        (x1, y1), (x2, y2) = a, b
        if y1 != y2:
            crosses = (y1 > py) != (y2 > py)
            x_at = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            inside ^= crosses & (px < x_at)
        on_edge |= _segment_distance(pts, a, b) <= tol

    return inside | on_edge


def _segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    length2 = float(ab @ ab)
    if length2 == 0.0:
        return np.linalg.norm(pts - a, axis=1)
    t = np.clip(((pts - a) @ ab) / length2, 0.0, 1.0)
    return np.linalg.norm(pts - (a + t[:, None] * ab), axis=1)


def segment_distances(points, poly) -> np.ndarray:
    """``(M, N)`` distances from each point to each edge; edge ``i`` runs from vertex ``i`` to ``i + 1``."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    poly = as_polygon(poly)
    require_vertices(poly, 1)
    return np.column_stack(
        [_segment_distance(pts, a, b) for a, b in zip(poly, np.roll(poly, -1, axis=0), strict=True)]
    )


def distance_to_polygon(points, poly) -> np.ndarray:
    """Euclidean distance from each point to the polygon outline."""
    return segment_distances(points, poly).min(axis=1)


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c) -> float:
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def is_simple(poly) -> bool:
    """True when no two non-adjacent edges cross."""
    poly = as_polygon(poly)
    require_vertices(poly)
    n = len(poly)
    for i in range(n):
        a1, a2 = poly[i], poly[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(a1, a2, poly[j], poly[(j + 1) % n]):
                return False
    return True


def simplify_polygon(poly, angle_tolerance: float | None = None) -> Polygon:
    """
    Drop repeated vertices and vertices whose turn is straight or a spike.

    The result may have fewer than three vertices when nothing with area remains.
    """
    tol = settings.ANGLE_TOLERANCE if angle_tolerance is None else angle_tolerance
    pts = [tuple(p) for p in as_polygon(poly)]

    changed = True
    while changed and len(pts) >= 3:
        changed = False
        i = 0
        while i < len(pts) and len(pts) >= 3:
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            v1 = (cur[0] - prev[0], cur[1] - prev[1])
            v2 = (cur[0] - nxt[0], cur[1] - nxt[1])
            l1, l2 = np.hypot(*v1), np.hypot(*v2)
            if l1 == 0.0 or l2 == 0.0 or abs(v1[0] * v2[1] - v1[1] * v2[0]) < tol * l1 * l2:
                del pts[i]
                i = max(i - 1, 0)
                changed = True
            else:
                i += 1

    if len(pts) < 3:
        # repeated points can survive when only two remain
        pts = list(dict.fromkeys(pts))
    return np.asarray(pts, dtype=np.float64).reshape(-1, 2)


def _rdp(chain: np.ndarray, epsilon: float) -> list[int]:
    """Indices kept by Ramer-Douglas-Peucker on an open chain."""
    keep = [0, len(chain) - 1]
    stack = [(0, len(chain) - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        inner = chain[lo + 1 : hi]
        dist = _segment_distance(inner, chain[lo], chain[hi])
        k = int(np.argmax(dist))
        if dist[k] > epsilon:
            mid = lo + 1 + k
            keep.append(mid)
            stack.extend(((lo, mid), (mid, hi)))
    return sorted(keep)


def approximate_polygon(poly, epsilon: float) -> Polygon:
    """Closed-polygon Douglas-Peucker approximation (the ``approxPolyDP`` role)."""
    poly = as_polygon(poly)
    if epsilon <= 0 or len(poly) <= 3:
        return poly.copy()

    # split the ring at the vertex farthest from vertex 0
    far = int(np.argmax(np.linalg.norm(poly - poly[0], axis=1)))
    if far == 0:
        return poly[:1].copy()
    first = poly[: far + 1]
    second = np.vstack([poly[far:], poly[:1]])
    keep_first = _rdp(first, epsilon)
    keep_second = [far + i for i in _rdp(second, epsilon)[1:-1]]
    return poly[keep_first + keep_second].copy()


def clip_polygon_to_bounds(poly, width: float, height: float) -> Polygon:
    """Clamp every vertex into ``[0, width] x [0, height]``."""
    poly = as_polygon(poly)
    clipped = poly.copy()
    clipped[:, 0] = np.clip(clipped[:, 0], 0.0, width)
    clipped[:, 1] = np.clip(clipped[:, 1], 0.0, height)
    return clipped
