import numpy as np
import pytest

from app.schema.annotation import AnnotationFile, TextInstance


def instance(points, ignore: bool = False, transcription: str | None = None) -> TextInstance:
    return TextInstance(points=[tuple(map(float, p)) for p in points], ignore=ignore, transcription=transcription)


def rect(x0: float, y0: float, x1: float, y1: float) -> list[tuple[float, float]]:
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def unit_square() -> np.ndarray:
    return np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=np.float64)


@pytest.fixture
def square4() -> np.ndarray:
    return np.array(rect(0, 0, 4, 4), dtype=np.float64)


@pytest.fixture
def triangle() -> np.ndarray:
    return np.array([[0, 0], [4, 0], [0, 3]], dtype=np.float64)


@pytest.fixture
def stacked_pair() -> list[TextInstance]:
    """Two 20x10 rectangles whose outlines sit 0.2 px apart."""
    return [instance(rect(4, 4, 24, 14)), instance(rect(4, 14.2, 24, 24.2))]


@pytest.fixture
def square_scene() -> AnnotationFile:
    return AnnotationFile(image_id="square", instances=[instance(rect(8, 8, 24, 24))], width=32, height=32)
