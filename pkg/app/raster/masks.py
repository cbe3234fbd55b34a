"""Small mask utilities shared by property checks, synthetic jitter and post-processing."""

import numpy as np

from app.core.errors import ShapeError
from app.core.types import BitMask

__all__ = ("boundary_pixels", "check_same_shape", "mask_iou")


def check_same_shape(*arrays) -> None:
    shapes = {np.shape(a) for a in arrays}
    if len(shapes) != 1:
        raise ShapeError(f"shape mismatch: {sorted(shapes)}")


def mask_iou(a: BitMask, b: BitMask) -> float:
    check_same_shape(a, b)
    union = int(np.count_nonzero(a | b))
    if union == 0:
        return 0.0
    return int(np.count_nonzero(a & b)) / union


def boundary_pixels(mask: BitMask) -> BitMask:
    """Set pixels with at least one 4-neighbour outside the set (the frame counts as outside)."""
    mask = np.asarray(mask, dtype=bool)
    padded = np.pad(mask, 1, constant_values=False)
    interior = padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    return mask & ~interior
