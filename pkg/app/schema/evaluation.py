"""
Evaluation report models.
"""

from enum import StrEnum

from pydantic import BaseModel, Field


class DontCareRule(StrEnum):
    iou = "iou"
    intersection_over_detection = "intersection_over_detection"


class MatchRecord(BaseModel):
    detection: int = Field(..., description="Index into the detection list")
    gt: int = Field(..., description="Index into the annotation's instance list")
    iou: float


class EvalReport(BaseModel):
    precision: float
    recall: float
    f_measure: float
    true_positives: int
    num_detections: int = Field(..., description="Detections left after don't-care removal")
    num_gt: int = Field(..., description="Non-ignore ground-truth instances")
    discarded_detections: int = Field(default=0, description="Detections absorbed by don't-care instances")
    images: int = 1
    matches: list[MatchRecord] = Field(default_factory=list)
