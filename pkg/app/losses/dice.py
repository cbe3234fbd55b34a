"""
Smoothed dice coefficient and its gradient.

    D = (2 * sum(R * G) + eps) / (sum(R^2) + sum(G^2) + eps)

over the pixels selected by a mask.
"""

import numpy as np

from app.core.config import settings
from app.core.types import BitMask, Grid
from app.raster.masks import check_same_shape

__all__ = ("dice", "dice_grad")


def _selection(r: Grid, g: Grid, mask: BitMask | None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if mask is None:
        mask = np.ones(r.shape, dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    check_same_shape(r, g, mask)
    return r, g, mask


def dice(r: Grid, g: Grid, mask: BitMask | None = None, eps: float | None = None) -> float:
    """Dice coefficient over ``mask``; 1 when the mask selects nothing."""
    r, g, mask = _selection(r, g, mask)
    eps = settings.DICE_EPS if eps is None else eps
    if not mask.any():
        return 1.0
    rm, gm = r[mask], g[mask]
    num = 2.0 * float(np.sum(rm * gm)) + eps
    den = float(np.sum(rm * rm)) + float(np.sum(gm * gm)) + eps
    return num / den


def dice_grad(r: Grid, g: Grid, mask: BitMask | None = None, eps: float | None = None) -> Grid:
    """Partial derivative of :func:`dice` with respect to every pixel of ``r``; zero outside the mask."""
    r, g, mask = _selection(r, g, mask)
    eps = settings.DICE_EPS if eps is None else eps
    grad = np.zeros(r.shape, dtype=np.float64)
    if not mask.any():
        return grad
    rm, gm = r[mask], g[mask]
    num = 2.0 * float(np.sum(rm * gm)) + eps
    den = float(np.sum(rm * rm)) + float(np.sum(gm * gm)) + eps
    grad[mask] = (2.0 * gm * den - 2.0 * rm * num) / (den * den)
    return grad
