"""
Deterministic synthetic scenes.

mixed     one text instance per quadrant: a rotated quadrangle or a curved
          14-point band, bending either way.
adjacent  two pairs of stacked rectangles per scene whose outlines touch or
          sit a fraction of a pixel apart, so their full masks merge.
bundled   the fixed mixed corpus used when no annotations are supplied.
"""

import numpy as np

from app.core.config import settings
from app.core.types import Polygon
from app.geometry.polygon import ensure_clockwise
from app.schema.annotation import AnnotationFile, SourceFormat, TextInstance
from app.schema.synth import CorpusKind
from app.synth.shapes import arc_band, rotate

__all__ = ("synth_corpus",)


def _instance(poly: Polygon) -> TextInstance:
    return TextInstance(points=[(float(x), float(y)) for x, y in poly])


def _quad(rng: np.random.Generator, center: np.ndarray) -> Polygon:
    w, h = rng.uniform(40, 60), rng.uniform(16, 24)
    corners = np.array([[-w / 2, -h / 2], [w / 2, -h / 2], [w / 2, h / 2], [-w / 2, h / 2]])
    corners += rng.uniform(-3, 3, size=(4, 2))
    return ensure_clockwise(rotate(corners, rng.uniform(-0.4, 0.4)) + center)


def _band(rng: np.random.Generator, center: np.ndarray) -> Polygon:
    band = arc_band(
        (0.0, 0.0),
        radius=rng.uniform(40, 55),
        thickness=rng.uniform(14, 20),
        span=rng.uniform(0.45, 0.6),
    )
    if rng.random() < 0.5:
        band[:, 1] = -band[:, 1]
    band -= (band.min(axis=0) + band.max(axis=0)) / 2
    return ensure_clockwise(band + center)


def _mixed_scene(rng: np.random.Generator, size: int) -> list[TextInstance]:
    cell = size / 2
    instances = []
    for row in range(2):
        for col in range(2):
            center = np.array([(col + 0.5) * cell, (row + 0.5) * cell])
            shape = _quad if rng.random() < 0.5 else _band
            instances.append(_instance(shape(rng, center)))
    return instances


def _rect(x0: float, y0: float, w: float, h: float) -> Polygon:
    return np.array([[x0, y0], [x0 + w, y0], [x0 + w, y0 + h], [x0, y0 + h]], dtype=np.float64)


def _adjacent_scene(rng: np.random.Generator, size: int) -> list[TextInstance]:
    scale = size / 160
    instances = []
    for top in (10, 90):
        x0 = int(rng.integers(10, 41) * scale)
        y0 = int((top + rng.integers(0, 21)) * scale)
        w1, w2 = int(rng.integers(60, 101) * scale), int(rng.integers(60, 101) * scale)
        h1, h2 = int(rng.integers(12, 19) * scale), int(rng.integers(12, 19) * scale)
        shift = int(rng.integers(-8, 9))
        gap = float(rng.uniform(0.0, 0.4))
        instances.append(_instance(_rect(x0, y0, min(w1, size - x0 - 2), h1)))
        x1 = max(x0 + shift, 1)
        instances.append(_instance(_rect(x1, y0 + h1 + gap, min(w2, size - x1 - 2), h2)))
    return instances


def synth_corpus(
    kind: CorpusKind | str = CorpusKind.mixed,
    count: int | None = None,
    seed: int | None = None,
    size: int | None = None,
) -> list[AnnotationFile]:
    kind = CorpusKind(kind)
    size = settings.SYNTH_SCENE_SIZE if size is None else size
    if kind is CorpusKind.bundled:
        count = settings.BUNDLED_CORPUS_SIZE if count is None else count
        seed = settings.BUNDLED_CORPUS_SEED if seed is None else seed
    count = 10 if count is None else count
    seed = 0 if seed is None else seed
    build = _adjacent_scene if kind is CorpusKind.adjacent else _mixed_scene

    scenes = []
    for index in range(count):
        rng = np.random.default_rng([seed, index])
        scenes.append(
            AnnotationFile(
                image_id=f"{kind.value}_{index:03d}",
                instances=build(rng, size),
                width=size,
                height=size,
                source_format=SourceFormat.synthetic,
            )
        )
    return scenes
