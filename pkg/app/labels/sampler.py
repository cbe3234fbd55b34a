"""
Shrink-ratio sampling.

Every (seed, instance, iteration) triple seeds its own generator, so a ratio
varies across instances of one image and across iterations for the same
instance, yet any single draw can be reproduced in isolation.
"""

import numpy as np

from app.core.errors import ConfigurationError, ParameterError
from app.schema.labels import RatioMode, RatioSampler

__all__ = ("sample_ratio",)


def sample_ratio(sampler: RatioSampler, instance: int, iteration: int = 0) -> float:
    if not sampler.ratios:
        raise ConfigurationError("ratio set is empty")
    if instance < 0 or iteration < 0:
        raise ParameterError(f"instance and iteration must be >= 0, got {instance}, {iteration}")

    if sampler.mode is RatioMode.fixed:
        return float(sampler.ratios[0])

    rng = np.random.default_rng([sampler.seed, instance, iteration])
    return float(sampler.ratios[int(rng.integers(len(sampler.ratios)))])
