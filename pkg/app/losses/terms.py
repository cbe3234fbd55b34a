"""
Loss terms of the three prediction heads.

complete: 1 - dice of the full-text map restricted to an OHEM mask.
central:  1 - dice of the central map restricted to predicted text (R_c >= 0.5).
ratio:    smooth-L1 between predicted and target distances on central pixels.
"""

import numpy as np

from app.core.config import settings
from app.core.log import logger
from app.core.types import BitMask, Grid
from app.losses.dice import dice
from app.raster.masks import check_same_shape
from app.schema.labels import LabelSet
from app.schema.losses import LossReport, LossWeights

__all__ = (
    "compute_losses",
    "loss_central",
    "loss_complete",
    "loss_ratio",
    "ohem_mask",
    "smooth_l1",
    "smooth_l1_grad",
    "total_loss",
)

# full-map probability from which a pixel counts as text for the central term
TEXT_GATE = 0.5


def ohem_mask(score: Grid, gt: BitMask, train_mask: BitMask, neg_ratio: int | None = None) -> BitMask:
    """
    Positives plus the ``neg_ratio * |positives|`` highest-scoring negatives.

    Ties among negatives go to the earlier pixel in raster order. Without
    positives the whole training mask is returned.
    """
    neg_ratio = settings.OHEM_NEG_RATIO if neg_ratio is None else neg_ratio
    score = np.asarray(score, dtype=np.float64)
    gt = np.asarray(gt, dtype=bool)
    train_mask = np.asarray(train_mask, dtype=bool)
    check_same_shape(score, gt, train_mask)

    positives = gt & train_mask
    n_pos = int(np.count_nonzero(positives))
    if n_pos == 0:
        return train_mask.copy()

    candidates = np.flatnonzero(~gt & train_mask)
    k = min(neg_ratio * n_pos, len(candidates))
    order = np.argsort(-score.ravel()[candidates], kind="stable")
    selected = positives.copy()
    selected.flat[candidates[order[:k]]] = True
    return selected


def loss_complete(full_pred: Grid, full_gt: BitMask, train_mask: BitMask, neg_ratio: int | None = None) -> float:
    selected = ohem_mask(full_pred, full_gt, train_mask, neg_ratio)
    return 1.0 - dice(full_pred, np.asarray(full_gt, dtype=np.float64), selected)


def loss_central(central_pred: Grid, central_gt: BitMask, full_pred: Grid, train_mask: BitMask) -> float:
    """Central dice loss on pixels predicted as text; 0 when no such pixel exists."""
    full_pred = np.asarray(full_pred, dtype=np.float64)
    check_same_shape(central_pred, central_gt, full_pred, train_mask)
    text = (full_pred >= TEXT_GATE) & np.asarray(train_mask, dtype=bool)
    if not text.any():
        return 0.0
    return 1.0 - dice(central_pred, np.asarray(central_gt, dtype=np.float64), text)


def smooth_l1(x):
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    out = np.where(ax < 1.0, 0.5 * x * x, ax - 0.5)
    return float(out) if out.ndim == 0 else out


def smooth_l1_grad(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.where(np.abs(x) < 1.0, x, np.sign(x))
    return float(out) if out.ndim == 0 else out


def loss_ratio(
    ratio_pred: Grid,
    ratio_gt: Grid,
    central_gt: BitMask,
    train_mask: BitMask,
    normalize: bool = False,
) -> float:
    """
    Smooth-L1 summed over ground-truth central pixels.

    With ``normalize`` the sum becomes a mean, which keeps values comparable
    across image sizes.
    """
    ratio_pred = np.asarray(ratio_pred, dtype=np.float64)
    ratio_gt = np.asarray(ratio_gt, dtype=np.float64)
    check_same_shape(ratio_pred, ratio_gt, central_gt, train_mask)
    region = np.asarray(central_gt, dtype=bool) & np.asarray(train_mask, dtype=bool)
    if not region.any():
        return 0.0
    values = smooth_l1(ratio_pred[region] - ratio_gt[region])
    return float(np.mean(values) if normalize else np.sum(values))


def total_loss(
    complete: float,
    central: float,
    ratio: float,
    weights: LossWeights | None = None,
    ohem_selected: int = 0,
) -> LossReport:
    weights = weights or LossWeights()
    total = weights.complete * complete + weights.central * central + weights.ratio * ratio
    return LossReport(complete=complete, central=central, ratio=ratio, total=total, ohem_selected=ohem_selected)


def compute_losses(
    full_pred: Grid,
    central_pred: Grid,
    ratio_pred: Grid,
    labels: LabelSet,
    weights: LossWeights | None = None,
    normalize_ratio: bool = False,
) -> LossReport:
    """Evaluate every loss term of one image against its label set."""
    selected = ohem_mask(full_pred, labels.full_mask, labels.train_mask)
    l_c = 1.0 - dice(full_pred, labels.full_mask.astype(np.float64), selected)
    l_s = loss_central(central_pred, labels.central_mask, full_pred, labels.train_mask)
    l_d = loss_ratio(ratio_pred, labels.ratio_map, labels.central_mask, labels.train_mask, normalize_ratio)
    report = total_loss(l_c, l_s, l_d, weights, int(np.count_nonzero(selected)))
    logger.debug(f"losses complete={l_c:.4f} central={l_s:.4f} ratio={l_d:.4f} total={report.total:.4f}")
    return report
