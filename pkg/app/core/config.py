"""
Config Maker
"""

# pyright: basic

__all__ = ("settings",)

from pydantic_settings import BaseSettings

from app import __project__, __version__


class Settings(BaseSettings):
    PROJECT_NAME: str = __project__
    PROJECT_VERSION: str = __version__
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    LOG_MESSAGE_MAX_LEN: int = 2000

    WORKER_CONCURRENCY: int = 4

    # Geometry
    ANGLE_TOLERANCE: float = 1e-6
    EDGE_TOLERANCE: float = 1e-9
    IOU_RESOLUTION: float = 1.0

    # Label generation
    RATIO_SET: list[float] = [0.3, 0.4, 0.5, 0.6]
    FIXED_RATIO: float = 0.4

    # Losses
    DICE_EPS: float = 1e-6
    OHEM_NEG_RATIO: int = 3
    LOSS_WEIGHTS: tuple[float, float, float] = (0.5, 0.25, 0.25)

    # Post-processing
    CENTRAL_THRESHOLD: float = 0.5
    FULL_THRESHOLD: float = 0.5
    MIN_COMPONENT_AREA: int = 16
    MIN_SCORE: float = 0.6
    CONTOUR_EPSILON: float = 1.0
    PIXEL_COMPENSATION: float = 0.5

    # Evaluation
    IOU_THRESHOLD: float = 0.5

    # Synthetic corpus
    SYNTH_SCENE_SIZE: int = 160
    BUNDLED_CORPUS_SIZE: int = 10
    BUNDLED_CORPUS_SEED: int = 0
    IMAGE_MARGIN: int = 8

    class Config:
        env_file = ".env"
        env_prefix = "CTREX_"
        env_file_encoding = "utf-8"
        extra = "ignore"
        case_sensitive = True


settings = Settings()  # type: ignore[call-arg]
