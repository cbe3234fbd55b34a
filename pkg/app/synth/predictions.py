"""
Prediction maps from ground truth.

Masks are jittered by toggling boundary pixels, then all three maps receive
seeded Gaussian noise. Probabilities are clamped to [0, 1] and distances to
>= 0.
"""

import numpy as np

from app.core.types import BitMask, Grid
from app.raster.masks import boundary_pixels
from app.schema.labels import LabelSet
from app.schema.synth import NoiseConfig

__all__ = ("synth_predictions",)

JITTER_PROBABILITY = 0.25


def _outer_boundary(mask: BitMask) -> BitMask:
    padded = np.pad(mask, 1, constant_values=False)
    grown = padded[:-2, 1:-1] | padded[2:, 1:-1] | padded[1:-1, :-2] | padded[1:-1, 2:]
    return grown & ~mask


def _jitter(mask: BitMask, rounds: int, rng: np.random.Generator) -> BitMask:
    mask = mask.copy()
    for _ in range(rounds):
        edge = boundary_pixels(mask) | _outer_boundary(mask)
        flips = edge & (rng.random(mask.shape) < JITTER_PROBABILITY)
        mask ^= flips
    return mask


def _extend_ratio(ratio: Grid, central: BitMask, rounds: int) -> Grid:
    """Give pixels the jitter added to the central mask the largest neighbouring distance."""
    ratio = np.where(central, ratio, 0.0)
    for _ in range(rounds):
        missing = central & (ratio == 0)
        if not missing.any():
            break
        padded = np.pad(ratio, 1)
        grown = np.maximum.reduce([padded[:-2, 1:-1], padded[2:, 1:-1], padded[1:-1, :-2], padded[1:-1, 2:]])
        ratio = np.where(missing, grown, ratio)
    return ratio


def _noisy(values: Grid, sigma: float, rng: np.random.Generator) -> Grid:
    if sigma == 0:
        return values
    return values + rng.normal(0.0, sigma, size=values.shape)


def synth_predictions(labels: LabelSet, noise: NoiseConfig | None = None) -> tuple[Grid, Grid, Grid]:
    """Return ``(full, central, ratio)`` prediction grids for a label set."""
    noise = noise or NoiseConfig()
    rng = np.random.default_rng(noise.seed)

    full_mask = _jitter(labels.full_mask, noise.boundary_jitter, rng)
    central_mask = _jitter(labels.central_mask, noise.boundary_jitter, rng)

    full = np.clip(_noisy(full_mask.astype(np.float64), noise.prob_noise_sigma, rng), 0.0, 1.0)
    central = np.clip(_noisy(central_mask.astype(np.float64), noise.prob_noise_sigma, rng), 0.0, 1.0)
    base = labels.ratio_map.astype(np.float64)
    if noise.boundary_jitter:
        base = _extend_ratio(base, central_mask, noise.boundary_jitter)
    ratio = np.maximum(_noisy(base, noise.ratio_noise_sigma, rng), 0.0)
    return full, central, ratio
