"""
Detection extraction.

central map -> components -> outlines -> miter expansion by the aggregated
ratio -> scoring on the full map.

The outline starts as a coarse structure: the simplified pixel-center contour,
or the minimum-area rectangle in ``quad_mode``. Each structure edge is then
refit to the pixel-edge midpoints on the component boundary it owns, and the
vertices are rebuilt where neighbouring fitted lines meet. The fitted outline
lies on the region the pixels cover, so it needs no compensation. Edges with
no boundary evidence keep their structure line shifted by
``pixel_compensation``, and a fit that comes out self-intersecting falls back
to the compensated structure.
"""

import numpy as np

from app.core.errors import DegeneratePolygonError
from app.core.log import logger
from app.core.types import BitMask, Grid, Polygon
from app.geometry.hull import min_area_rect
from app.geometry.offset import expand_polygon
from app.geometry.polygon import (
    approximate_polygon,
    clip_polygon_to_bounds,
    ensure_clockwise,
    is_simple,
    perimeter,
    segment_distances,
    signed_area,
    simplify_polygon,
)
from app.raster.components import LabelGrid, connected_components
from app.raster.contour import trace_contour
from app.raster.fill import rasterize_polygon
from app.raster.masks import boundary_pixels, check_same_shape
from app.schema.annotation import Detection
from app.schema.inference import (
    ComponentDiagnostic,
    PostprocessConfig,
    PostprocessResult,
    RatioAggregation,
)

__all__ = ("extract_detections", "extract_detections_with_diagnostics")

# boundary points this close to a structure corner stay out of the line fit
CORNER_MARGIN = 1.5
MIN_FIT_POINTS = 3
MIN_FIT_SPAN = 2.0
# fits turning more than 0.35 rad away from the structure edge are not trusted
MAX_FIT_TURN = np.cos(0.35)
# lines meeting at a smaller sine are treated as parallel
PARALLEL_SINE = 0.05
MAX_CORNER_SHIFT = 3.0

Line = tuple[np.ndarray, np.ndarray]


def _seed_mask(full: Grid, central: Grid, cfg: PostprocessConfig) -> BitMask:
    text = full >= cfg.full_threshold
    if cfg.full_only:
        return text
    seed = central >= cfg.central_threshold
    if cfg.gate_by_full:
        seed &= text
    return seed


def _pixel_rect(component: BitMask) -> Polygon:
    ys, xs = np.nonzero(boundary_pixels(component))
    corners = np.concatenate(
        [
            np.column_stack([xs, ys]),
            np.column_stack([xs + 1, ys]),
            np.column_stack([xs, ys + 1]),
            np.column_stack([xs + 1, ys + 1]),
        ]
    ).astype(np.float64)
    return min_area_rect(corners)


def _crack_points(component: BitMask) -> np.ndarray:
    """Midpoints of the pixel sides separating the component from everything else."""
    ys, xs = np.nonzero(component)
    y0, x0 = int(ys.min()), int(xs.min())
    inner = component[y0 : int(ys.max()) + 1, x0 : int(xs.max()) + 1]
    h, w = inner.shape
    padded = np.pad(inner, 1, constant_values=False)
    points = []
    for dy, dx in ((0, 1), (0, -1), (1, 0), (-1, 0)):
        outside = ~padded[1 + dy : h + 1 + dy, 1 + dx : w + 1 + dx]
        py, px = np.nonzero(inner & outside)
        points.append(np.column_stack([px + x0 + 0.5 + 0.5 * dx, py + y0 + 0.5 + 0.5 * dy]))
    return np.vstack(points).astype(np.float64)


def _edge_line(points: np.ndarray, a: np.ndarray, b: np.ndarray, shift: float) -> Line:
    """Point and unit direction of the line fitted to one edge's boundary points."""
    length = float(np.linalg.norm(b - a))
    u = (b - a) / length
    # outward for clockwise-on-screen rings
    normal = np.array([u[1], -u[0]])
    if not len(points):
        return a + shift * normal, u

    along = (points - a) @ u
    margin = min(CORNER_MARGIN, length / 4)
    core = points[(along >= margin) & (along <= length - margin)]
    if len(core) >= MIN_FIT_POINTS and np.ptp(core @ u) >= MIN_FIT_SPAN:
        center = core.mean(axis=0)
        _, _, vt = np.linalg.svd(core - center)
        direction = vt[0] if vt[0] @ u >= 0 else -vt[0]
        if direction @ u >= MAX_FIT_TURN:
            return center, direction
    offset = float(np.mean((points - a) @ normal))
    return a + offset * normal, u


def _meet(first: Line, second: Line, near: np.ndarray, reach: float) -> np.ndarray:
    (ca, ua), (cb, ub) = first, second
    cross = ua[0] * ub[1] - ua[1] * ub[0]
    if abs(cross) >= PARALLEL_SINE:
        gap = cb - ca
        point = ca + ((gap[0] * ub[1] - gap[1] * ub[0]) / cross) * ua
        if np.linalg.norm(point - near) <= reach:
            return point
    # halfway between the projections of the structure corner onto both lines
    on_first = ca + ((near - ca) @ ua) * ua
    on_second = cb + ((near - cb) @ ub) * ub
    return 0.5 * (on_first + on_second)


def _fit_outline(structure: Polygon, component: BitMask, shift: float) -> Polygon | None:
    """Refit every edge of ``structure`` to the component boundary; None when the fit is unusable."""
    ring = ensure_clockwise(structure)
    cracks = _crack_points(component)
    owner = np.argmin(segment_distances(cracks, ring), axis=1)
    n = len(ring)
    lines = [_edge_line(cracks[owner == i], ring[i], ring[(i + 1) % n], shift) for i in range(n)]
    lengths = np.linalg.norm(np.roll(ring, -1, axis=0) - ring, axis=1)
    # a corner may move up to half of its shorter edge
    reach = np.maximum(MAX_CORNER_SHIFT, 0.5 * np.minimum(lengths, np.roll(lengths, 1)))
    corners = [_meet(lines[i - 1], lines[i], ring[i], reach[i]) for i in range(n)]
    fitted = simplify_polygon(np.array(corners))
    if len(fitted) < 3 or signed_area(fitted) <= 0 or not is_simple(fitted):
        return None
    return fitted


def _outline(labels: LabelGrid, label: int, component: BitMask, cfg: PostprocessConfig) -> tuple[Polygon, float, int]:
    """Base polygon, the compensation it still needs and the raw contour length."""
    if cfg.quad_mode:
        structure, shift, vertices = _pixel_rect(component), 0.0, 4
    else:
        contour = trace_contour(labels, label, min_area=1)
        structure = simplify_polygon(approximate_polygon(contour, cfg.contour_epsilon))
        shift, vertices = cfg.pixel_compensation, len(contour)
        if len(structure) < 3 or abs(signed_area(structure)) < 1e-9:
            # single rows, columns and diagonals have no area to expand
            return _pixel_rect(component), 0.0, vertices

    if cfg.fit_edges:
        fitted = _fit_outline(structure, component, shift)
        if fitted is not None:
            return fitted, 0.0, vertices
        logger.debug(f"component {label}: edge fit rejected, using the structure outline")
    return structure, shift, vertices


def _distance(ratio: Grid, component: BitMask, cfg: PostprocessConfig) -> float:
    values = ratio[component]
    d = float(np.median(values) if cfg.ratio_aggregation is RatioAggregation.median else np.mean(values))
    return max(d, 0.0)


def _fixed_ratio_distance(outline: Polygon, r: float) -> float:
    # the outline is taken as the original shape scaled by r
    return abs(signed_area(outline)) * (1.0 - r * r) / (r * perimeter(outline))


def _score(full: Grid, polygon: Polygon) -> float:
    height, width = full.shape
    region = rasterize_polygon(polygon, width, height)
    if not region.any():
        return 0.0
    return float(np.clip(np.mean(full[region]), 0.0, 1.0))


def extract_detections_with_diagnostics(
    full: Grid, central: Grid, ratio: Grid, cfg: PostprocessConfig | None = None
) -> PostprocessResult:
    """Detections sorted by descending score, plus one diagnostic record per component."""
    cfg = cfg or PostprocessConfig()
    full = np.asarray(full, dtype=np.float64)
    central = np.asarray(central, dtype=np.float64)
    ratio = np.asarray(ratio, dtype=np.float64)
    check_same_shape(full, central, ratio)
    height, width = full.shape

    labels = connected_components(_seed_mask(full, central, cfg), connectivity=8)
    areas = labels.areas()
    detections: list[Detection] = []
    diagnostics: list[ComponentDiagnostic] = []

    for label in range(1, labels.count + 1):
        diag = ComponentDiagnostic(label=label, area=int(areas[label]))
        diagnostics.append(diag)
        if diag.area < cfg.min_component_area:
            diag.reason = "area"
            continue

        component = labels.component(label)
        try:
            outline, compensation, diag.contour_vertices = _outline(labels, label, component, cfg)
            if cfg.full_only:
                polygon = expand_polygon(outline, compensation)
                diag.distance = 0.0
            elif cfg.fixed_ratio is not None:
                base = expand_polygon(outline, compensation)
                diag.distance = _fixed_ratio_distance(base, cfg.fixed_ratio)
                polygon = expand_polygon(base, diag.distance)
            else:
                diag.distance = _distance(ratio, component, cfg)
                polygon = expand_polygon(outline, compensation + diag.distance)
        except DegeneratePolygonError as e:
            logger.warning(f"component {label} ({diag.area}px) skipped: {e}")
            diag.reason = "degenerate"
            continue

        polygon = clip_polygon_to_bounds(polygon, width, height)
        diag.score = _score(full, polygon)
        if diag.score < cfg.min_score:
            diag.reason = "score"
            continue
        diag.kept = True
        detections.append(Detection.from_polygon(polygon, diag.score))

    detections.sort(key=lambda det: -det.score)
    logger.debug(f"{labels.count} components, {len(detections)} detections")
    return PostprocessResult(detections=detections, components=diagnostics)


def extract_detections(full: Grid, central: Grid, ratio: Grid, cfg: PostprocessConfig | None = None) -> list[Detection]:
    return extract_detections_with_diagnostics(full, central, ratio, cfg).detections
