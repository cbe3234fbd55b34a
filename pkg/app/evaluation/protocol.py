"""
Detection evaluation.

Detections that overlap a don't-care instance are dropped before matching.
The rest are matched one-to-one to non-ignore instances, greedily by
descending IoU; ties go to the lower (detection, instance) index pair.
"""

import numpy as np

from app.core.config import settings
from app.core.log import logger
from app.geometry.overlap import polygon_iou, polygon_overlap
from app.schema.annotation import Detection, TextInstance
from app.schema.evaluation import DontCareRule, EvalReport, MatchRecord

__all__ = ("accumulate", "evaluate", "f_measure")


def f_measure(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _rates(tp: int, detections: int, gts: int) -> tuple[float, float, float]:
    precision = tp / detections if detections else 1.0
    recall = tp / gts if gts else 1.0
    return precision, recall, f_measure(precision, recall)


def _absorbed(det: Detection, ignore: TextInstance, threshold: float, rule: DontCareRule, resolution: float | None) -> bool:
    if rule is DontCareRule.iou:
        overlap = polygon_iou(det.polygon, ignore.polygon, resolution)
        return overlap > 0 and overlap >= threshold
    inter, _, area_det, _ = polygon_overlap(det.polygon, ignore.polygon, resolution)
    return inter > 0 and inter / area_det >= threshold


def evaluate(
    detections: list[Detection],
    gts: list[TextInstance],
    iou_threshold: float | None = None,
    dont_care_rule: DontCareRule = DontCareRule.iou,
    resolution: float | None = None,
) -> EvalReport:
    threshold = settings.IOU_THRESHOLD if iou_threshold is None else iou_threshold
    care = [i for i, gt in enumerate(gts) if not gt.ignore]
    ignored = [gt for gt in gts if gt.ignore]

    kept = [
        i
        for i, det in enumerate(detections)
        if not any(_absorbed(det, gt, threshold, dont_care_rule, resolution) for gt in ignored)
    ]
    discarded = len(detections) - len(kept)

    iou = np.zeros((len(kept), len(care)))
    for a, di in enumerate(kept):
        for b, gi in enumerate(care):
            iou[a, b] = polygon_iou(detections[di].polygon, gts[gi].polygon, resolution)

    # pairs that do not overlap never match, even at a zero threshold
    pairs = [(a, b) for a in range(len(kept)) for b in range(len(care)) if iou[a, b] > 0 and iou[a, b] >= threshold]
    candidates = sorted((-iou[a, b], a, b) for a, b in pairs)
    used_det: set[int] = set()
    used_gt: set[int] = set()
    matches: list[MatchRecord] = []
    for neg_iou, a, b in candidates:
        if a in used_det or b in used_gt:
            continue
        used_det.add(a)
        used_gt.add(b)
        matches.append(MatchRecord(detection=kept[a], gt=care[b], iou=-neg_iou))

    tp = len(matches)
    precision, recall, f = _rates(tp, len(kept), len(care))
    logger.debug(f"eval: {tp} matched, {len(kept)} detections ({discarded} discarded), {len(care)} instances")
    return EvalReport(
        precision=precision,
        recall=recall,
        f_measure=f,
        true_positives=tp,
        num_detections=len(kept),
        num_gt=len(care),
        discarded_detections=discarded,
        matches=matches,
    )


def accumulate(reports: list[EvalReport]) -> EvalReport:
    """Corpus-level report from per-image counts."""
    tp = sum(r.true_positives for r in reports)
    dets = sum(r.num_detections for r in reports)
    gts = sum(r.num_gt for r in reports)
    precision, recall, f = _rates(tp, dets, gts)
    return EvalReport(
        precision=precision,
        recall=recall,
        f_measure=f,
        true_positives=tp,
        num_detections=dets,
        num_gt=gts,
        discarded_detections=sum(r.discarded_detections for r in reports),
        images=sum(r.images for r in reports),
    )
