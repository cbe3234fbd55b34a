"""
Exact Euclidean distance transform.

Column pass: 1-D distance to the nearest set pixel along each column.
Row pass: lower envelope of parabolas over the squared column distances
(Felzenszwalb-Huttenlocher), which yields exact squared distances.
"""

import numpy as np

from app.core.types import BitMask, Grid

__all__ = ("DISTANCE_SENTINEL", "distance_transform")

DISTANCE_SENTINEL = float(np.finfo(np.float64).max)


def _envelope(f: np.ndarray) -> np.ndarray:
    n = len(f)
    v = np.zeros(n, dtype=np.int64)
    z = np.empty(n + 1, dtype=np.float64)
    k = 0
    z[0], z[1] = -np.inf, np.inf

    for q in range(1, n):
        while True:
            p = v[k]
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2 * q - 2 * p)
            if s <= z[k]:
                k -= 1
                continue
            break
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = np.inf

    out = np.empty(n, dtype=np.float64)
    k = 0
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        out[q] = (q - v[k]) ** 2 + f[v[k]]
    return out


def distance_transform(mask: BitMask) -> Grid:
    """Distance of every pixel to the nearest set pixel; all :data:`DISTANCE_SENTINEL` for an empty mask."""
    mask = np.asarray(mask, dtype=bool)
    height, width = mask.shape
    if not mask.any():
        return np.full((height, width), DISTANCE_SENTINEL)

    far = height + width
    col = np.where(mask, 0, far).astype(np.int64)
    for y in range(1, height):
        col[y] = np.minimum(col[y], col[y - 1] + 1)
    for y in range(height - 2, -1, -1):
        col[y] = np.minimum(col[y], col[y + 1] + 1)

    # columns without any set pixel keep a large finite cost
    squared = np.where(col >= far, float(far) ** 2 * 4, col.astype(np.float64) ** 2)
    rows = np.vstack([_envelope(squared[y]) for y in range(height)])
    return np.sqrt(rows)
