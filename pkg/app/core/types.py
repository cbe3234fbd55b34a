"""
Array aliases shared by every module.

Coordinates follow the image convention: x to the right, y pointing down.
A polygon is clockwise on screen exactly when its shoelace sum is positive.
"""

import numpy as np
import numpy.typing as npt

__all__ = ("BitMask", "Grid", "Polygon")

# (N, 2) float64, columns (x, y)
Polygon = npt.NDArray[np.float64]

# (H, W) float64, row-major
Grid = npt.NDArray[np.float64]

# (H, W) bool, row-major
BitMask = npt.NDArray[np.bool_]
