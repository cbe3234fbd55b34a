"""
Command output models.
"""

from pydantic import BaseModel, Field

from app.schema.evaluation import EvalReport
from app.schema.losses import LossReport


class ImageLoss(BaseModel):
    image_id: str
    losses: LossReport


class LossSummary(BaseModel):
    images: list[ImageLoss] = Field(default_factory=list)
    mean_total: float = 0.0


class SweepRow(BaseModel):
    ratio: float = Field(..., description="Fixed shrink ratio; 0 traces the full map without expansion")
    instances: int
    full_components: int
    central_components: int | None = None
    separated_scenes: int = Field(default=0, description="Scenes with exactly one central component per instance")
    report: EvalReport


class SweepReport(BaseModel):
    scenes: int
    seed: int
    rows: list[SweepRow] = Field(default_factory=list)


class E2EReport(BaseModel):
    corpus: EvalReport
    images: dict[str, EvalReport] = Field(default_factory=dict)
