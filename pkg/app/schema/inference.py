"""
Post-processing configuration and diagnostics models.
"""

from enum import StrEnum

from pydantic import BaseModel, Field, field_validator

from app.core.config import settings
from app.core.errors import ConfigurationError
from app.schema.annotation import Detection


class RatioAggregation(StrEnum):
    mean = "mean"
    median = "median"


class PostprocessConfig(BaseModel):
    central_threshold: float = Field(default=settings.CENTRAL_THRESHOLD, description="Binarization threshold of the central map")
    full_threshold: float = Field(default=settings.FULL_THRESHOLD, description="Binarization threshold of the full map")
    min_component_area: int = Field(default=settings.MIN_COMPONENT_AREA, description="Smallest kept component, in pixels")
    min_score: float = Field(default=settings.MIN_SCORE, ge=0.0, le=1.0, description="Smallest kept detection score")
    quad_mode: bool = Field(default=False, description="Expand minimum-area rectangles instead of traced contours")
    ratio_aggregation: RatioAggregation = Field(default=RatioAggregation.mean)
    gate_by_full: bool = Field(default=True, description="Only keep central pixels the full map also marks as text")
    full_only: bool = Field(default=False, description="Trace full-map components directly, without expansion")
    fixed_ratio: float | None = Field(default=None, description="Derive the distance from the contour with this ratio")
    contour_epsilon: float = Field(default=settings.CONTOUR_EPSILON, ge=0.0, description="Contour simplification tolerance")
    pixel_compensation: float = Field(default=settings.PIXEL_COMPENSATION, ge=0.0, description="Offset from pixel centers to the region outline")
    fit_edges: bool = Field(default=True, description="Refit every outline edge to the pixel boundary of the component")

    @field_validator("central_threshold", "full_threshold")
    @classmethod
    def check_threshold(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ConfigurationError(f"thresholds must lie in (0, 1), got {value}")
        return value

    @field_validator("min_component_area")
    @classmethod
    def check_area(cls, value: int) -> int:
        if value < 1:
            raise ConfigurationError(f"min_component_area must be >= 1, got {value}")
        return value

    @field_validator("fixed_ratio")
    @classmethod
    def check_fixed_ratio(cls, value: float | None) -> float | None:
        if value is not None and not 0.0 < value <= 1.0:
            raise ConfigurationError(f"fixed_ratio must lie in (0, 1], got {value}")
        return value


class ComponentDiagnostic(BaseModel):
    label: int
    area: int
    contour_vertices: int = 0
    distance: float | None = None
    score: float | None = None
    kept: bool = False
    reason: str | None = Field(default=None, description="Why the component produced no detection")


class PostprocessResult(BaseModel):
    detections: list[Detection] = Field(default_factory=list)
    components: list[ComponentDiagnostic] = Field(default_factory=list)
