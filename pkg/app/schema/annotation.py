"""
Annotation and detection file models.
"""

from enum import StrEnum

import numpy as np
from pydantic import BaseModel, Field, FiniteFloat

from app.core.types import Polygon

Point = tuple[FiniteFloat, FiniteFloat]


class SourceFormat(StrEnum):
    canonical = "canonical"
    icdar15 = "icdar15"
    synthetic = "synthetic"


class TextInstance(BaseModel):
    """One annotated text region; ``ignore`` marks a don't-care instance."""

    points: list[Point] = Field(..., min_length=3, description="Outline vertices as [x, y] pixel coordinates")
    ignore: bool = Field(default=False, description="Don't-care instance excluded from supervision and scoring")
    transcription: str | None = Field(default=None, description="Transcription, if any")

    @property
    def polygon(self) -> Polygon:
        return np.asarray(self.points, dtype=np.float64)


class AnnotationFile(BaseModel):
    image_id: str = Field(default="", description="Image identifier, usually the file stem")
    instances: list[TextInstance] = Field(default_factory=list)
    width: int | None = Field(default=None, ge=1, description="Image width when known")
    height: int | None = Field(default=None, ge=1, description="Image height when known")
    source_format: SourceFormat = Field(default=SourceFormat.canonical, exclude=True)


class Detection(BaseModel):
    points: list[Point] = Field(..., min_length=3, description="Detected outline vertices")
    score: float = Field(..., ge=0.0, le=1.0, description="Mean full-text probability inside the outline")

    @property
    def polygon(self) -> Polygon:
        return np.asarray(self.points, dtype=np.float64)

    @classmethod
    def from_polygon(cls, polygon: Polygon, score: float) -> "Detection":
        return cls(points=[(float(x), float(y)) for x, y in polygon], score=score)


class DetectionFile(BaseModel):
    image_id: str = ""
    detections: list[Detection] = Field(default_factory=list)
