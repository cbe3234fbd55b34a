import numpy as np
import pytest

from app.core.errors import ParameterError, ShapeError
from app.geometry.offset import expand_polygon
from app.raster.components import connected_components
from app.raster.contour import trace_contour
from app.raster.distance import DISTANCE_SENTINEL, distance_transform
from app.raster.fill import rasterize_polygon, rasterize_polygons
from app.raster.masks import boundary_pixels, mask_iou
from app.synth.shapes import random_convex_polygon


def test_rasterize_uses_pixel_centers():
    mask = rasterize_polygon([(1, 1), (3, 1), (3, 3), (1, 3)], 4, 4)
    assert {(int(x), int(y)) for y, x in zip(*np.nonzero(mask), strict=True)} == {(1, 1), (2, 1), (1, 2), (2, 2)}


def test_rasterize_edge_cases():
    assert not rasterize_polygon([(0, 0), (4, 0), (2, 0)], 4, 4).any()
    assert rasterize_polygon([(-1, -1), (5, -1), (5, 5), (-1, 5)], 4, 4).all()
    assert not rasterize_polygon([(10, 10), (12, 10), (12, 12)], 4, 4).any()
    with pytest.raises(ParameterError):
        rasterize_polygon([(0, 0), (1, 0), (1, 1)], 0, 4)


def test_rasterize_flat_polygon_through_pixel_centers():
    assert not rasterize_polygon([(0.5, 0.5), (3.5, 0.5), (2, 0.5)], 4, 4).any()
    assert not rasterize_polygon([(0.5, 0.5), (1.5, 1.5), (3.5, 3.5)], 4, 4).any()
    assert not rasterize_polygon([(0.5, 0.5), (2.5, 0.5)], 4, 4).any()
    assert rasterize_polygon([(0.5, 0.5), (3.5, 0.5), (3.5, 1.5)], 4, 4).sum() >= 4


def test_rasterize_is_monotone_under_expansion(rng):
    for _ in range(20):
        poly = random_convex_polygon(rng, radii=(12.0, 8.0))
        inner = rasterize_polygon(poly, 64, 64)
        outer = rasterize_polygon(expand_polygon(poly, rng.uniform(0.1, 3.0)), 64, 64)
        assert not (inner & ~outer).any()


def test_rasterize_polygons_is_a_union():
    a = [(0, 0), (2, 0), (2, 2), (0, 2)]
    b = [(3, 3), (5, 3), (5, 5), (3, 5)]
    both = rasterize_polygons([a, b], 6, 6)
    assert np.array_equal(both, rasterize_polygon(a, 6, 6) | rasterize_polygon(b, 6, 6))


def test_components_separate_blobs():
    mask = np.zeros((5, 8), dtype=bool)
    mask[1:4, 0:2] = True
    mask[1:4, 5:8] = True
    grid = connected_components(mask)
    assert grid.count == 2
    assert grid.labels[1, 0] == 1
    assert grid.labels[1, 5] == 2
    assert list(grid.areas()) == [25, 6, 9]


def test_components_connectivity():
    mask = np.array([[1, 0], [0, 1]], dtype=bool)
    assert connected_components(mask, connectivity=8).count == 1
    assert connected_components(mask, connectivity=4).count == 2
    assert connected_components(np.zeros((3, 3), dtype=bool)).count == 0


def test_components_label_in_raster_order():
    # the U shape joins only on its last row; its label must still be 1
    mask = np.array(
        [
            [1, 0, 1, 0, 0],
            [1, 0, 1, 0, 1],
            [1, 1, 1, 0, 0],
        ],
        dtype=bool,
    )
    grid = connected_components(mask)
    assert grid.count == 2
    assert grid.labels[0, 0] == grid.labels[0, 2] == 1
    assert grid.labels[1, 4] == 2


def test_components_partition_and_transpose(rng):
    for _ in range(30):
        mask = rng.random((12, 15)) < 0.4
        grid = connected_components(mask)
        assert np.array_equal(grid.labels > 0, mask)
        assert set(np.unique(grid.labels[mask])) == set(range(1, grid.count + 1))
        assert connected_components(mask.T).count == grid.count


def test_components_reject_bad_input():
    with pytest.raises(ShapeError):
        connected_components(np.zeros(5, dtype=bool))
    with pytest.raises(ParameterError):
        connected_components(np.zeros((3, 3), dtype=bool), connectivity=6)


def test_contour_of_block():
    mask = np.zeros((5, 5), dtype=bool)
    mask[0:3, 0:3] = True
    grid = connected_components(mask)
    contour = trace_contour(grid, 1)
    assert len(contour) == 8
    assert np.array_equal(rasterize_polygon(contour, 5, 5), mask)


def test_contour_is_clockwise():
    mask = np.zeros((8, 8), dtype=bool)
    mask[2:6, 1:7] = True
    contour = trace_contour(connected_components(mask), 1)
    x, y = contour[:, 0], contour[:, 1]
    assert np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) > 0


def test_contour_of_thin_bar_runs_along_its_centers():
    mask = np.zeros((3, 7), dtype=bool)
    mask[1, 1:6] = True
    contour = trace_contour(connected_components(mask), 1)
    assert (contour[:, 1] == 1.5).all()
    assert (contour[:, 0].min(), contour[:, 0].max()) == (1.5, 5.5)
    # a flat outline encloses nothing
    assert not rasterize_polygon(contour, 7, 3).any()


def test_contour_rejects_small_or_unknown_components():
    mask = np.zeros((4, 4), dtype=bool)
    mask[1, 1] = True
    grid = connected_components(mask)
    with pytest.raises(ParameterError):
        trace_contour(grid, 1)
    with pytest.raises(ParameterError):
        trace_contour(grid, 2)


def test_contour_round_trip_is_within_boundary_band(rng):
    for _ in range(20):
        mask = rasterize_polygon(random_convex_polygon(rng, radii=(14.0, 9.0)), 64, 64)
        contour = trace_contour(connected_components(mask), 1)
        xor = mask ^ rasterize_polygon(contour, 64, 64)
        assert np.count_nonzero(xor) <= 2 * np.count_nonzero(boundary_pixels(mask))


def test_distance_transform_examples():
    mask = np.zeros((5, 5), dtype=bool)
    mask[2, 2] = True
    dist = distance_transform(mask)
    assert dist[4, 2] == 2.0
    assert dist[0, 0] == pytest.approx(np.sqrt(8))
    assert not distance_transform(np.ones((3, 4), dtype=bool)).any()
    assert (distance_transform(np.zeros((3, 3), dtype=bool)) == DISTANCE_SENTINEL).all()


def test_distance_transform_matches_brute_force(rng):
    ys, xs = np.mgrid[0:16, 0:16]
    for _ in range(25):
        mask = rng.random((16, 16)) < rng.uniform(0.02, 0.3)
        if not mask.any():
            continue
        sy, sx = np.nonzero(mask)
        squared = (ys[..., None] - sy) ** 2 + (xs[..., None] - sx) ** 2
        expected = np.sqrt(squared.min(axis=-1).astype(np.float64))
        assert np.array_equal(distance_transform(mask), expected)


def test_mask_helpers():
    a = np.zeros((4, 4), dtype=bool)
    a[:2] = True
    b = np.zeros((4, 4), dtype=bool)
    b[1:3] = True
    assert mask_iou(a, b) == pytest.approx(1 / 3)
    assert mask_iou(np.zeros((2, 2), bool), np.zeros((2, 2), bool)) == 0.0
    with pytest.raises(ShapeError):
        mask_iou(a, b[:3])

    block = np.zeros((5, 5), dtype=bool)
    block[1:4, 1:4] = True
    edge = boundary_pixels(block)
    assert np.count_nonzero(edge) == 8
    assert not edge[2, 2]
    assert not boundary_pixels(np.ones((3, 3), dtype=bool))[1, 1]
