"""
Randomized geometry property suite.

Per trial a random convex polygon is expanded and shrunk and the results are
checked against exact oracles: offset edge distances, the shrink/expand round
trip, area growth, independence from the starting vertex, and containment of
the Euclidean offset region measured by the distance transform.
"""

import numpy as np

from app.core.log import logger
from app.core.types import Polygon
from app.geometry.offset import expand_polygon, inradius, shrink_polygon
from app.geometry.polygon import distance_to_polygon, interior_angles, points_in_polygon, signed_area
from app.raster.distance import distance_transform
from app.raster.fill import rasterize_polygon
from app.raster.masks import mask_iou
from app.schema.properties import CheckCount, PropertyReport
from app.synth.shapes import random_convex_polygon

__all__ = ("edge_survival_distance", "run_geometry_checks")

GRID = 64
EDGE_TOLERANCE = 1e-9
ROUND_TRIP_TOLERANCE = 1e-6
DISK_IOU_TRIAL = 0.95
DISK_IOU_MEAN = 0.98


def edge_survival_distance(poly: Polygon) -> float:
    """Inward offset at which the first edge of a convex polygon shrinks to a point."""
    half = interior_angles(poly) / 2
    lengths = np.linalg.norm(np.roll(poly, -1, axis=0) - poly, axis=1)
    cot = 1.0 / np.tan(half)
    return float(np.min(lengths / (cot + np.roll(cot, -1))))


def _record(checks: dict[str, CheckCount], name: str, ok: bool, value: float, larger_is_worse: bool = True) -> None:
    count = checks.setdefault(name, CheckCount(worst=0.0 if larger_is_worse else 1.0))
    if ok:
        count.passed += 1
    else:
        count.failed += 1
    count.worst = max(count.worst, value) if larger_is_worse else min(count.worst, value)


def _edge_distance_error(poly: Polygon, out: Polygon, d: float) -> float:
    edge = np.roll(poly, -1, axis=0) - poly
    direction = edge / np.linalg.norm(edge, axis=1)[:, None]
    inward = np.column_stack([-direction[:, 1], direction[:, 0]])
    # both endpoints of every output edge must sit at signed distance -d
    start = np.einsum("ij,ij->i", out - poly, inward)
    end = np.einsum("ij,ij->i", np.roll(out, -1, axis=0) - poly, inward)
    return float(max(np.abs(start + d).max(), np.abs(end + d).max()))


def _pixel_centers() -> np.ndarray:
    gx, gy = np.meshgrid(np.arange(GRID) + 0.5, np.arange(GRID) + 0.5)
    return np.column_stack([gx.ravel(), gy.ravel()])


def _raster_checks(checks: dict[str, CheckCount], poly: Polygon, d: float, centers: np.ndarray) -> None:
    miter = rasterize_polygon(expand_polygon(poly, d), GRID, GRID)

    near = distance_transform(rasterize_polygon(poly, GRID, GRID)) <= d
    leaked = int(np.count_nonzero(near & ~miter))
    _record(checks, "containment", leaked == 0, leaked)

    outside = miter.ravel() & ~points_in_polygon(centers, poly)
    excess = float(distance_to_polygon(centers[outside], poly).max() - d) if outside.any() else 0.0
    bound = d * (1.0 / np.sin(interior_angles(poly).min() / 2) - 1.0)
    _record(checks, "hausdorff", excess <= bound + EDGE_TOLERANCE, excess - bound)


def _disk_iou(poly: Polygon, d: float, centers: np.ndarray) -> float:
    miter = rasterize_polygon(expand_polygon(poly, d), GRID, GRID)
    disk = points_in_polygon(centers, poly) | (distance_to_polygon(centers, poly) <= d)
    return mask_iou(miter, disk.reshape(GRID, GRID))


def run_geometry_checks(trials: int = 1000, seed: int = 0) -> PropertyReport:
    rng = np.random.default_rng(seed)
    centers = _pixel_centers()
    checks: dict[str, CheckCount] = {}
    disk_ious: list[float] = []

    for trial in range(trials):
        radius = rng.uniform(10.0, 18.0, size=2)
        poly = random_convex_polygon(
            rng, min_angle_deg=20.0, center=(GRID / 2, GRID / 2), radii=tuple(radius), min_edge=2.0
        )
        limit = min(0.5 * inradius(poly), 0.5 * edge_survival_distance(poly))
        d = float(rng.uniform(0.05, 1.0) * limit)

        out = expand_polygon(poly, d)
        err = _edge_distance_error(poly, out, d)
        _record(checks, "edge_distance", err < EDGE_TOLERANCE, err)

        shrunk = shrink_polygon(poly, d)
        if shrunk is None or len(shrunk) != len(poly):
            _record(checks, "round_trip", False, np.inf)
        else:
            gap = float(np.abs(expand_polygon(shrunk, d) - poly).max())
            _record(checks, "round_trip", gap < ROUND_TRIP_TOLERANCE, gap)

        grown = signed_area(out) - signed_area(poly)
        _record(checks, "area_monotonic", grown > 0, -grown)

        k = int(rng.integers(len(poly)))
        rolled = np.roll(expand_polygon(np.roll(poly, -k, axis=0), d), k, axis=0)
        drift = float(np.abs(rolled - out).max())
        _record(checks, "rotation_invariance", drift < EDGE_TOLERANCE, drift)

        _raster_checks(checks, poly, d, centers)

        # miter vs round offset, on polygons without sharp corners
        blunt = random_convex_polygon(
            rng,
            n_vertices=int(rng.integers(6, 11)),
            min_angle_deg=60.0,
            center=(GRID / 2, GRID / 2),
            radii=tuple(radius),
            min_edge=2.0,
        )
        iou = _disk_iou(blunt, float(rng.uniform(0.05, 0.5) * inradius(blunt)), centers)
        disk_ious.append(iou)
        _record(checks, "disk_iou", iou >= DISK_IOU_TRIAL, iou, larger_is_worse=False)

        if trial and trial % 100 == 0:
            logger.debug(f"property suite: {trial}/{trials} trials")

    mean_iou = float(np.mean(disk_ious)) if disk_ious else None
    if mean_iou is not None and mean_iou < DISK_IOU_MEAN:
        _record(checks, "disk_iou_mean", False, mean_iou, larger_is_worse=False)
    report = PropertyReport(trials=trials, seed=seed, checks=checks, mean_disk_iou=mean_iou)
    logger.info(f"property suite: {report.failed} failures over {trials} trials")
    return report
