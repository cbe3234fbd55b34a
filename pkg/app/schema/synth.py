"""
Synthetic prediction and corpus models.
"""

from enum import StrEnum

from pydantic import BaseModel, Field


class NoiseConfig(BaseModel):
    prob_noise_sigma: float = Field(default=0.0, ge=0.0, description="Gaussian noise on probability maps")
    ratio_noise_sigma: float = Field(default=0.0, ge=0.0, description="Gaussian noise on the ratio map, in pixels")
    boundary_jitter: int = Field(default=0, ge=0, description="Rounds of random boundary-pixel toggling")
    seed: int = Field(default=0, ge=0)

    @property
    def noiseless(self) -> bool:
        return self.prob_noise_sigma == 0 and self.ratio_noise_sigma == 0 and self.boundary_jitter == 0


class CorpusKind(StrEnum):
    mixed = "mixed"
    adjacent = "adjacent"
    bundled = "bundled"
