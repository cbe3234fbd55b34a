"""
Label generation models.
"""

from enum import StrEnum

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.core.config import settings
from app.core.errors import ConfigurationError


class RatioMode(StrEnum):
    fixed = "fixed"
    uniform_set = "uniform_set"


class RatioSampler(BaseModel):
    """Per-instance shrink ratio source; deterministic given ``seed``."""

    mode: RatioMode = Field(default=RatioMode.uniform_set)
    ratios: list[float] = Field(default_factory=lambda: list(settings.RATIO_SET))
    seed: int = Field(default=0, ge=0)

    @field_validator("ratios")
    @classmethod
    def check_ratios(cls, ratios: list[float]) -> list[float]:
        for r in ratios:
            if not 0.0 < r <= 1.0:
                raise ConfigurationError(f"shrink ratios must lie in (0, 1], got {r}")
        return ratios

    @model_validator(mode="after")
    def check_fixed(self) -> "RatioSampler":
        if self.mode is RatioMode.fixed and len(self.ratios) > 1:
            raise ConfigurationError("fixed mode takes exactly one ratio")
        return self

    @classmethod
    def fixed(cls, ratio: float, seed: int = 0) -> "RatioSampler":
        return cls(mode=RatioMode.fixed, ratios=[ratio], seed=seed)

    @classmethod
    def uniform(cls, ratios: list[float] | None = None, seed: int = 0) -> "RatioSampler":
        return cls(
            mode=RatioMode.uniform_set,
            ratios=list(settings.RATIO_SET) if ratios is None else list(ratios),
            seed=seed,
        )


class InstanceLabel(BaseModel):
    index: int = Field(..., description="Position of the instance in the annotation")
    ratio: float | None = Field(default=None, description="Sampled shrink ratio")
    distance: float | None = Field(default=None, description="Offset distance derived from the ratio, in pixels")
    central_pixels: int = Field(default=0, description="Pixels of the rasterized central region")
    collapsed: bool = Field(default=False, description="Central region vanished; full supervision only")
    degenerate: bool = Field(default=False, description="Outline could not be offset at all")


class LabelSet(BaseModel):
    full_mask: np.ndarray = Field(..., description="Union of non-ignore instances (bool, H x W)")
    central_mask: np.ndarray = Field(..., description="Union of shrunk instances (bool, H x W)")
    ratio_map: np.ndarray = Field(..., description="Offset distance on central pixels, 0 elsewhere (float64, H x W)")
    train_mask: np.ndarray = Field(..., description="False inside don't-care polygons (bool, H x W)")
    per_instance: list[InstanceLabel] = Field(default_factory=list)

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @property
    def height(self) -> int:
        return int(self.full_mask.shape[0])

    @property
    def width(self) -> int:
        return int(self.full_mask.shape[1])

    def instance_records(self) -> list[dict]:
        return [item.model_dump() for item in self.per_instance]

    def summary(self) -> dict[str, int]:
        return {
            "full_pixels": int(np.count_nonzero(self.full_mask)),
            "central_pixels": int(np.count_nonzero(self.central_mask)),
            "ignored_pixels": int(np.count_nonzero(~self.train_mask)),
            "collapsed": sum(item.collapsed for item in self.per_instance),
        }
