"""
Geometry property suite report models.
"""

from pydantic import BaseModel, Field


class CheckCount(BaseModel):
    passed: int = 0
    failed: int = 0
    worst: float = Field(default=0.0, description="Largest observed deviation or smallest observed score")


class PropertyReport(BaseModel):
    trials: int
    seed: int
    checks: dict[str, CheckCount] = Field(default_factory=dict)
    mean_disk_iou: float | None = None

    @property
    def failed(self) -> int:
        return sum(c.failed for c in self.checks.values())

    @property
    def ok(self) -> bool:
        return self.failed == 0
