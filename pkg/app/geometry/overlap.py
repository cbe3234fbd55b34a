"""
Polygon overlap measured on a shared raster.

Both polygons are scaled by ``resolution`` (cells per pixel unit) and
rasterized on one grid that covers their joint bounding box, so the IoU is the
rasterized-mask IoU by construction.
"""

import numpy as np

from app.core.config import settings
from app.geometry.polygon import as_polygon
from app.raster.fill import rasterize_polygon

__all__ = ("polygon_iou", "polygon_overlap")


def polygon_overlap(a, b, resolution: float | None = None) -> tuple[int, int, int, int]:
    """Return ``(intersection, union, area_a, area_b)`` in raster cells."""
    res = settings.IOU_RESOLUTION if resolution is None else float(resolution)
    pa = as_polygon(a) * res
    pb = as_polygon(b) * res
    if len(pa) < 3 or len(pb) < 3:
        return 0, 0, 0, 0

    both = np.vstack([pa, pb])
    lo = np.floor(both.min(axis=0)) - 1
    hi = np.ceil(both.max(axis=0)) + 1
    width, height = int(hi[0] - lo[0]), int(hi[1] - lo[1])
    ma = rasterize_polygon(pa - lo, width, height)
    mb = rasterize_polygon(pb - lo, width, height)
    inter = int(np.count_nonzero(ma & mb))
    union = int(np.count_nonzero(ma | mb))
    return inter, union, int(np.count_nonzero(ma)), int(np.count_nonzero(mb))


def _bbox_disjoint(a, b) -> bool:
    pa, pb = as_polygon(a), as_polygon(b)
    return bool(np.any(pa.max(axis=0) < pb.min(axis=0)) or np.any(pb.max(axis=0) < pa.min(axis=0)))


def polygon_iou(a, b, resolution: float | None = None) -> float:
    """Intersection over union in ``[0, 1]``; 0 for disjoint or zero-area inputs."""
    if len(as_polygon(a)) < 3 or len(as_polygon(b)) < 3 or _bbox_disjoint(a, b):
        return 0.0
    inter, union, _, _ = polygon_overlap(a, b, resolution)
    if union == 0:
        return 0.0
    return inter / union

