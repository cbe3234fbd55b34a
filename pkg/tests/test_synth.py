import numpy as np
import pytest

from app.core.errors import ParameterError
from app.geometry.polygon import interior_angles, signed_area
from app.harness.pipeline import run_e2e_image
from app.labels.generate import generate_labels
from app.raster.components import connected_components
from app.schema.labels import RatioSampler
from app.schema.synth import CorpusKind, NoiseConfig
from app.synth.corpus import synth_corpus
from app.synth.predictions import synth_predictions
from app.synth.shapes import arc_band, random_convex_polygon


@pytest.fixture
def square_labels(square_scene):
    return generate_labels(square_scene.instances, 32, 32, RatioSampler.fixed(0.5))


def test_noiseless_predictions_reproduce_labels(square_labels):
    full, central, ratio = synth_predictions(square_labels)
    np.testing.assert_array_equal(full, square_labels.full_mask.astype(float))
    np.testing.assert_array_equal(central, square_labels.central_mask.astype(float))
    np.testing.assert_array_equal(ratio, square_labels.ratio_map)
    assert NoiseConfig().noiseless


def test_predictions_are_deterministic(square_labels):
    noise = NoiseConfig(prob_noise_sigma=0.2, ratio_noise_sigma=0.5, boundary_jitter=2, seed=9)
    for a, b in zip(synth_predictions(square_labels, noise), synth_predictions(square_labels, noise)):
        np.testing.assert_array_equal(a, b)
    other = synth_predictions(square_labels, noise.model_copy(update={"seed": 10}))
    assert not np.array_equal(other[0], synth_predictions(square_labels, noise)[0])


def test_probability_noise_magnitude(square_labels):
    full, central, _ = synth_predictions(square_labels, NoiseConfig(prob_noise_sigma=0.1, seed=3))
    mad = np.abs(full - square_labels.full_mask).mean()
    assert 0.03 <= mad <= 0.05


def test_output_ranges(square_labels):
    noise = NoiseConfig(prob_noise_sigma=0.8, ratio_noise_sigma=5.0, boundary_jitter=1, seed=4)
    full, central, ratio = synth_predictions(square_labels, noise)
    assert full.min() >= 0.0 and full.max() <= 1.0
    assert central.min() >= 0.0 and central.max() <= 1.0
    assert ratio.min() >= 0.0


def test_jitter_only_touches_the_boundary(square_labels):
    full, _, _ = synth_predictions(square_labels, NoiseConfig(boundary_jitter=1, seed=5))
    original = square_labels.full_mask
    flipped = (full > 0.5) != original
    assert flipped.any()
    padded = np.pad(original, 1, mode="edge")
    neighbours = [padded[:-2, 1:-1], padded[2:, 1:-1], padded[1:-1, :-2], padded[1:-1, 2:]]
    differs = np.logical_or.reduce([n != original for n in neighbours])
    assert not (flipped & ~differs).any()


def test_jitter_keeps_ratio_on_central_pixels(square_labels):
    _, central, ratio = synth_predictions(square_labels, NoiseConfig(boundary_jitter=2, seed=6))
    assert ratio[central > 0.5].mean() > 2.5
    assert (ratio[central <= 0.5] == 0).all()


def test_corpus_is_deterministic():
    a = synth_corpus("mixed", count=3, seed=5)
    b = synth_corpus("mixed", count=3, seed=5)
    assert [s.model_dump() for s in a] == [s.model_dump() for s in b]
    assert [s.image_id for s in a] == ["mixed_000", "mixed_001", "mixed_002"]
    assert a[0].model_dump() != synth_corpus("mixed", count=1, seed=6)[0].model_dump()


def test_bundled_corpus():
    corpus = synth_corpus(CorpusKind.bundled)
    assert len(corpus) == 10
    assert all(s.width == s.height == 160 for s in corpus)
    assert all(len(s.instances) == 4 for s in corpus)


def test_mixed_corpus_instances_fit_the_scene():
    for scene in synth_corpus("mixed", count=5, seed=1):
        for inst in scene.instances:
            poly = inst.polygon
            assert signed_area(poly) > 0
            assert poly.min() >= 0 and poly.max() <= scene.width


def test_adjacent_corpus_merges_full_masks_only():
    for scene in synth_corpus("adjacent", count=5, seed=2):
        labels = generate_labels(scene.instances, scene.width, scene.height, RatioSampler.fixed(0.5))
        assert connected_components(labels.full_mask).count == 2
        assert connected_components(labels.central_mask).count == len(scene.instances) == 4


def test_adjacent_instances_separate_at_ratio_0_4():
    sampler = RatioSampler.fixed(0.4)
    for index, scene in enumerate(synth_corpus("adjacent", count=50, seed=5)):
        labels = generate_labels(scene.instances, scene.width, scene.height, sampler)
        assert connected_components(labels.full_mask).count < len(scene.instances)
        assert connected_components(labels.central_mask).count == len(scene.instances)
        report = run_e2e_image(scene, index, sampler, NoiseConfig())
        assert report.num_detections == len(scene.instances)
        assert report.f_measure == 1.0


def test_mixed_corpus_end_to_end_without_noise():
    sampler = RatioSampler.uniform(seed=4)
    for index, scene in enumerate(synth_corpus("mixed", count=50, seed=6)):
        assert run_e2e_image(scene, index, sampler, NoiseConfig()).f_measure == 1.0


def test_random_convex_polygon(rng):
    for _ in range(50):
        poly = random_convex_polygon(rng, min_angle_deg=40)
        angles = interior_angles(poly)
        assert 3 <= len(poly) <= 8
        assert signed_area(poly) > 0
        assert angles.min() >= np.deg2rad(40) - 1e-12
        assert angles.max() < np.pi


def test_random_convex_polygon_rejects_impossible_requests(rng):
    with pytest.raises(ParameterError):
        random_convex_polygon(rng, n_vertices=2)
    with pytest.raises(ParameterError):
        random_convex_polygon(rng, n_vertices=3, min_angle_deg=75)


def test_arc_band():
    band = arc_band((80, 80), radius=50, thickness=16, span=0.5)
    assert len(band) == 14
    assert signed_area(band) > 0


def test_accuracy_degrades_with_noise():
    sigmas = (0.0, 0.05, 0.1, 0.2)
    corpus = synth_corpus("mixed", count=2, seed=8)
    sampler = RatioSampler.fixed(0.5)
    scores = []
    for sigma in sigmas:
        f = [
            run_e2e_image(scene, index, sampler, NoiseConfig(prob_noise_sigma=sigma, boundary_jitter=1, seed=seed)).f_measure
            for seed in range(20)
            for index, scene in enumerate(corpus)
        ]
        scores.append(float(np.mean(f)))
    assert scores[0] >= 0.9
    for better, worse in zip(scores, scores[1:]):
        assert better >= worse - 0.02
