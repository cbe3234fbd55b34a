"""
Polygon rasterization.

Pixel ``(i, j)`` (column i, row j) is set when its center ``(i + 0.5, j + 0.5)``
lies inside the polygon under the even-odd rule or on one of its edges.
Polygons whose vertices are all collinear cover no pixels.
"""

import math

import numpy as np

from app.core.errors import ParameterError
from app.core.types import BitMask
from app.geometry.polygon import as_polygon, is_flat, points_in_polygon

__all__ = ("rasterize_polygon", "rasterize_polygons")


def _check_size(width: int, height: int) -> None:
    if width < 1 or height < 1:
        raise ParameterError(f"grid dimensions must be positive, got {width}x{height}")


def rasterize_polygon(poly, width: int, height: int) -> BitMask:
    _check_size(width, height)
    mask = np.zeros((height, width), dtype=bool)
    poly = as_polygon(poly)
    if is_flat(poly):
        return mask

    lo = poly.min(axis=0)
    hi = poly.max(axis=0)
    # one extra pixel on each side absorbs rounding at the pixel-center boundary
    i0 = max(0, math.floor(lo[0] - 0.5))
    i1 = min(width - 1, math.ceil(hi[0] - 0.5))
    j0 = max(0, math.floor(lo[1] - 0.5))
    j1 = min(height - 1, math.ceil(hi[1] - 0.5))
    if i0 > i1 or j0 > j1:
        return mask

    xs = np.arange(i0, i1 + 1) + 0.5
    ys = np.arange(j0, j1 + 1) + 0.5
    gx, gy = np.meshgrid(xs, ys)
    inside = points_in_polygon(np.column_stack([gx.ravel(), gy.ravel()]), poly)
    mask[j0 : j1 + 1, i0 : i1 + 1] = inside.reshape(gx.shape)
    return mask


def rasterize_polygons(polys, width: int, height: int) -> BitMask:
    """Union of several rasterized polygons."""
    _check_size(width, height)
    mask = np.zeros((height, width), dtype=bool)
    for poly in polys:
        mask |= rasterize_polygon(poly, width, height)
    return mask
