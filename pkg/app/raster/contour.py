"""
Outer-boundary tracing (the ``findContours`` role).

Moore-neighbour tracing over the 8-neighbourhood, visiting neighbours
clockwise on screen. The walk stops when the first move out of the start
pixel repeats. Holes are not reported.
"""

import numpy as np

from app.core.errors import ParameterError
from app.core.types import Polygon
from app.raster.components import LabelGrid

__all__ = ("trace_contour",)

# W, NW, N, NE, E, SE, S, SW as (dx, dy); clockwise on screen with y down
_RING = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_RING_INDEX = {offset: i for i, offset in enumerate(_RING)}


def trace_contour(labels: LabelGrid, label: int, min_area: int = 2) -> Polygon:
    """
    Boundary pixel centers of one component, in clockwise order.

    Raises:
        ParameterError: unknown label, or a component smaller than ``min_area`` pixels.
    """
    if not 1 <= label <= labels.count:
        raise ParameterError(f"unknown component label {label} (count={labels.count})")
    comp = labels.component(label)
    area = int(comp.sum())
    if area < min_area:
        raise ParameterError(f"component {label} has {area} pixels, below the minimum of {min_area}")

    height, width = comp.shape

    def inside(x: int, y: int) -> bool:
        return 0 <= x < width and 0 <= y < height and bool(comp[y, x])

    first = int(np.argmax(comp.ravel()))
    start = (first % width, first // width)
    points = [start]
    cur = start
    back = 0  # the west neighbour of the first raster pixel is background
    second: tuple[int, int] | None = None

    for _ in range(4 * area + 16):
        found = None
        for k in range(1, 9):
            idx = (back + k) % 8
            if inside(cur[0] + _RING[idx][0], cur[1] + _RING[idx][1]):
                found = idx
                break
        if found is None:
            break

        nxt = (cur[0] + _RING[found][0], cur[1] + _RING[found][1])
        if second is None:
            second = nxt
        elif cur == start and nxt == second:
            break

        before = _RING[(found - 1) % 8]
        back = _RING_INDEX[(cur[0] + before[0] - nxt[0], cur[1] + before[1] - nxt[1])]
        cur = nxt
        points.append(cur)

    if len(points) > 1 and points[-1] == start:
        points.pop()
    return np.asarray(points, dtype=np.float64) + 0.5
