"""
Label generation for one image.

For every non-ignore instance a ratio ``r`` is sampled, converted into an
offset distance ``d`` and the outline is shrunk by ``d``. The shrunk region
becomes the instance's central region and carries ``d`` in the ratio map.
"""

import numpy as np

from app.core.errors import DegeneratePolygonError
from app.core.log import logger
from app.geometry.offset import offset_distance_for_ratio, shrink_polygon
from app.geometry.polygon import ensure_clockwise
from app.labels.sampler import sample_ratio
from app.raster.fill import rasterize_polygon
from app.schema.annotation import TextInstance
from app.schema.labels import InstanceLabel, LabelSet, RatioSampler

__all__ = ("generate_labels",)


def _central_region(
    instance: TextInstance, index: int, width: int, height: int, sampler: RatioSampler, iteration: int
) -> tuple[InstanceLabel, np.ndarray | None]:
    ratio = distance = None
    try:
        poly = ensure_clockwise(instance.polygon)
        ratio = sample_ratio(sampler, index, iteration)
        distance = offset_distance_for_ratio(poly, ratio)
        shrunk = shrink_polygon(poly, distance)
    except DegeneratePolygonError as e:
        logger.warning(f"instance {index} skipped for central supervision: {e}")
        return InstanceLabel(index=index, ratio=ratio, distance=distance, collapsed=True, degenerate=True), None

    region = rasterize_polygon(shrunk, width, height) if shrunk is not None else None
    if region is None or not region.any():
        logger.debug(f"instance {index} collapsed at r={ratio} (d={distance:.3f}px)")
        return InstanceLabel(index=index, ratio=ratio, distance=distance, collapsed=True), None

    record = InstanceLabel(
        index=index,
        ratio=ratio,
        distance=distance,
        central_pixels=int(np.count_nonzero(region)),
    )
    return record, region


def generate_labels(
    instances: list[TextInstance],
    width: int,
    height: int,
    sampler: RatioSampler | None = None,
    iteration: int = 0,
) -> LabelSet:
    """
    Build the label set of one image.

    Ignore instances clear the training mask inside their outline and never
    contribute supervision. Collapsed or degenerate instances stay in the full
    mask and are flagged in ``per_instance``. Later instances overwrite earlier
    ones where central regions overlap.
    """
    sampler = sampler or RatioSampler()
    full = np.zeros((height, width), dtype=bool)
    central = np.zeros((height, width), dtype=bool)
    ratio_map = np.zeros((height, width), dtype=np.float64)
    train = np.ones((height, width), dtype=bool)
    records: list[InstanceLabel] = []

    for index, instance in enumerate(instances):
        outline = rasterize_polygon(instance.polygon, width, height)
        if instance.ignore:
            train &= ~outline
            continue
        full |= outline

        record, region = _central_region(instance, index, width, height, sampler, iteration)
        records.append(record)
        if region is None:
            continue

        overlap = int(np.count_nonzero(region & central))
        if overlap:
            logger.warning(f"instance {index} overlaps earlier central regions on {overlap} pixels")
        central |= region
        ratio_map[region] = record.distance

    central &= full
    ratio_map[~central] = 0.0
    logger.debug(
        f"labels {width}x{height}: {len(records)} instances, {sum(r.collapsed for r in records)} collapsed"
    )
    return LabelSet(
        full_mask=full,
        central_mask=central,
        ratio_map=ratio_map,
        train_mask=train,
        per_instance=records,
    )
