"""
Loss weighting and report models.
"""

from pydantic import BaseModel, Field, model_validator

from app.core.config import settings
from app.core.errors import ConfigurationError

WEIGHT_SUM_TOLERANCE = 1e-9


class LossWeights(BaseModel):
    """Weights of the complete, central and ratio terms; they must sum to one."""

    complete: float = Field(default=settings.LOSS_WEIGHTS[0], ge=0.0)
    central: float = Field(default=settings.LOSS_WEIGHTS[1], ge=0.0)
    ratio: float = Field(default=settings.LOSS_WEIGHTS[2], ge=0.0)

    @model_validator(mode="after")
    def check_sum(self) -> "LossWeights":
        total = self.complete + self.central + self.ratio
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ConfigurationError(f"loss weights must sum to 1, got {total}")
        return self

    @classmethod
    def normalized(cls, complete: float, central: float, ratio: float) -> "LossWeights":
        total = complete + central + ratio
        if total <= 0:
            raise ConfigurationError("loss weights must have a positive sum")
        return cls(complete=complete / total, central=central / total, ratio=ratio / total)


class LossReport(BaseModel):
    complete: float = Field(..., description="1 - dice of the full map under the OHEM mask")
    central: float = Field(..., description="1 - dice of the central map inside predicted text")
    ratio: float = Field(..., description="Smooth-L1 ratio regression over central pixels")
    total: float = Field(..., description="Weighted sum of the three terms")
    ohem_selected: int = Field(default=0, description="Pixels selected by hard example mining")
