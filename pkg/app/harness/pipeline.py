"""
Per-image pipelines behind the CLI commands.

Everything here is synchronous and pure given its arguments; the CLI fans the
calls out over worker threads.
"""

import math

import numpy as np

from app.core.config import settings
from app.evaluation.protocol import accumulate, evaluate
from app.inference.postprocess import extract_detections
from app.labels.generate import generate_labels
from app.losses.terms import compute_losses
from app.raster.components import connected_components
from app.schema.annotation import AnnotationFile
from app.schema.evaluation import DontCareRule, EvalReport
from app.schema.inference import PostprocessConfig
from app.schema.labels import LabelSet, RatioSampler
from app.schema.losses import LossWeights
from app.schema.report import ImageLoss, SweepRow
from app.schema.synth import NoiseConfig
from app.synth.predictions import synth_predictions

__all__ = (
    "image_labels",
    "image_loss",
    "image_noise",
    "image_size",
    "run_e2e_image",
    "sweep_row",
)


def image_size(ann: AnnotationFile, override: tuple[int, int] | None = None) -> tuple[int, int]:
    """Explicit size, else the size recorded in the annotation, else the outline extent plus a margin."""
    if override is not None:
        return override
    if ann.width is not None and ann.height is not None:
        return ann.width, ann.height
    if not ann.instances:
        return settings.IMAGE_MARGIN, settings.IMAGE_MARGIN
    top = np.vstack([inst.polygon for inst in ann.instances]).max(axis=0)
    return (
        max(math.ceil(top[0]), 1) + settings.IMAGE_MARGIN,
        max(math.ceil(top[1]), 1) + settings.IMAGE_MARGIN,
    )


def image_noise(noise: NoiseConfig, index: int) -> NoiseConfig:
    """Per-image noise stream derived from the run seed."""
    return noise.model_copy(update={"seed": noise.seed * 100_003 + index})


def image_labels(ann: AnnotationFile, sampler: RatioSampler, iteration: int = 0, size=None) -> LabelSet:
    width, height = image_size(ann, size)
    return generate_labels(ann.instances, width, height, sampler, iteration)


def run_e2e_image(
    ann: AnnotationFile,
    index: int,
    sampler: RatioSampler,
    noise: NoiseConfig,
    cfg: PostprocessConfig | None = None,
    iou_threshold: float | None = None,
    dont_care_rule: DontCareRule = DontCareRule.iou,
) -> EvalReport:
    """labels -> synthetic predictions -> detections -> evaluation for one image."""
    labels = image_labels(ann, sampler)
    full, central, ratio = synth_predictions(labels, image_noise(noise, index))
    detections = extract_detections(full, central, ratio, cfg)
    return evaluate(detections, ann.instances, iou_threshold, dont_care_rule)


def image_loss(
    ann: AnnotationFile,
    index: int,
    sampler: RatioSampler,
    noise: NoiseConfig,
    weights: LossWeights | None = None,
    normalize_ratio: bool = False,
) -> ImageLoss:
    labels = image_labels(ann, sampler)
    full, central, ratio = synth_predictions(labels, image_noise(noise, index))
    report = compute_losses(full, central, ratio, labels, weights, normalize_ratio)
    return ImageLoss(image_id=ann.image_id, losses=report)


def sweep_row(corpus: list[AnnotationFile], ratio: float) -> SweepRow:
    """
    Separation and end-to-end accuracy with one fixed ratio on noiseless maps.

    Ratio 0 is the baseline without central regions: full-map components are
    traced and reported as they are.
    """
    reports: list[EvalReport] = []
    instances = full_components = central_components = separated = 0

    for ann in corpus:
        care = sum(not inst.ignore for inst in ann.instances)
        instances += care
        if ratio == 0:
            labels = image_labels(ann, RatioSampler.fixed(1.0))
            cfg = PostprocessConfig(full_only=True)
        else:
            labels = image_labels(ann, RatioSampler.fixed(ratio))
            cfg = PostprocessConfig(fixed_ratio=ratio)
            count = connected_components(labels.central_mask).count
            central_components += count
            separated += count == care
        full_components += connected_components(labels.full_mask).count

        full, central, ratio_map = synth_predictions(labels)
        reports.append(evaluate(extract_detections(full, central, ratio_map, cfg), ann.instances))

    return SweepRow(
        ratio=ratio,
        instances=instances,
        full_components=full_components,
        central_components=None if ratio == 0 else central_components,
        separated_scenes=separated,
        report=accumulate(reports),
    )
