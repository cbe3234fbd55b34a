import numpy as np
import pytest
from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import ShapeError
from app.labels.generate import generate_labels
from app.losses.dice import dice, dice_grad
from app.losses.terms import (
    compute_losses,
    loss_central,
    loss_complete,
    loss_ratio,
    ohem_mask,
    smooth_l1,
    smooth_l1_grad,
    total_loss,
)
from app.schema.labels import RatioSampler
from app.schema.losses import LossWeights
from app.schema.synth import NoiseConfig
from app.synth.predictions import synth_predictions
from tests.conftest import instance, rect

H = 1e-5


def test_dice_examples():
    g = np.zeros((4, 4))
    g[:2] = 1
    assert dice(g, g) == 1.0
    assert dice(g, 1 - g) < 1e-6
    assert dice(np.full((5, 5), 0.5), np.ones((5, 5))) == pytest.approx(0.8, rel=1e-6)
    assert dice(g, g, np.zeros((4, 4), dtype=bool)) == 1.0
    with pytest.raises(ShapeError):
        dice(g, g[:3])


def test_dice_is_symmetric(rng):
    r, g = rng.random((6, 6)), rng.random((6, 6))
    mask = rng.random((6, 6)) < 0.7
    assert dice(r, g, mask) == pytest.approx(dice(g, r, mask))
    assert 0 < dice(r, g, mask) <= 1


def test_dice_grad_matches_finite_differences(rng):
    for _ in range(10):
        r = rng.random((6, 6))
        g = (rng.random((6, 6)) < 0.5).astype(float)
        mask = rng.random((6, 6)) < 0.8
        analytic = dice_grad(r, g, mask)
        numeric = np.zeros_like(r)
        for idx in np.ndindex(r.shape):
            step = np.zeros_like(r)
            step[idx] = H
            numeric[idx] = (dice(r + step, g, mask) - dice(r - step, g, mask)) / (2 * H)
        np.testing.assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-8)
        assert not analytic[~mask].any()


def test_dice_grad_edge_cases():
    g = np.zeros((3, 3))
    g[1] = 1
    assert not dice_grad(g, g, np.zeros((3, 3), dtype=bool)).any()
    np.testing.assert_allclose(dice_grad(g, g), 0.0, atol=1e-6)


def test_ohem_examples():
    score = np.linspace(0, 1, 104).reshape(8, 13)
    gt = np.zeros((8, 13), dtype=bool)
    gt.flat[[0, 10, 20, 30]] = True
    train = np.ones_like(gt)
    selected = ohem_mask(score, gt, train)
    assert np.count_nonzero(selected) == 4 + 12
    assert selected.flat[92:].all()
    assert not selected.flat[40:92].any()

    assert np.array_equal(ohem_mask(score, np.zeros_like(gt), train), train)
    assert np.array_equal(ohem_mask(score, train, train), train)


def test_ohem_matches_brute_force(rng):
    for _ in range(100):
        shape = (int(rng.integers(3, 12)), int(rng.integers(3, 12)))
        score = rng.integers(0, 5, size=shape) / 4
        gt = rng.random(shape) < 0.15
        train = rng.random(shape) < 0.9
        selected = ohem_mask(score, gt, train, neg_ratio=3)

        positives = gt & train
        if not positives.any():
            assert np.array_equal(selected, train)
            continue
        negatives = [i for i in range(score.size) if train.flat[i] and not gt.flat[i]]
        k = min(3 * int(positives.sum()), len(negatives))
        chosen = sorted(negatives, key=lambda i: (-score.flat[i], i))[:k]
        expected = positives.copy()
        expected.flat[chosen] = True
        assert np.array_equal(selected, expected)


def test_loss_complete():
    g = np.zeros((2, 4), dtype=bool)
    g[0, :2] = True
    assert loss_complete(g.astype(float), g, np.ones_like(g)) == 0.0
    # 2 positives and 6 negatives all selected: dice = 2 / (2 + 2)
    assert loss_complete(np.full((2, 4), 0.5), g, np.ones_like(g)) == pytest.approx(0.5, rel=1e-6)
    assert loss_complete(1 - g.astype(float), g, np.ones_like(g)) == pytest.approx(1.0, abs=1e-6)


def test_loss_central():
    g = np.zeros((4, 4), dtype=bool)
    g[1:3, 1:3] = True
    train = np.ones((4, 4), dtype=bool)
    assert loss_central(g.astype(float), g, np.ones((4, 4)), train) == 0.0
    assert loss_central(np.ones((4, 4)), g, np.zeros((4, 4)), train) == 0.0

    full_pred = np.zeros((4, 4))
    full_pred[:, :2] = 1.0
    assert loss_central(np.full((4, 4), 0.5), np.ones((4, 4), bool), full_pred, train) == pytest.approx(0.2, rel=1e-5)


def test_loss_central_gate_ignores_postprocess_threshold(monkeypatch):
    central_gt = np.zeros((4, 4), dtype=bool)
    central_gt[:, :2] = True
    full_pred = np.zeros((4, 4))
    full_pred[:2] = 0.5
    full_pred[2:] = 0.7
    train = np.ones((4, 4), dtype=bool)
    before = loss_central(np.full((4, 4), 0.5), central_gt, full_pred, train)
    assert before == pytest.approx(1 / 3, rel=1e-5)
    monkeypatch.setattr(settings, "FULL_THRESHOLD", 0.9)
    assert loss_central(np.full((4, 4), 0.5), central_gt, full_pred, train) == before


@pytest.mark.parametrize(("x", "expected"), [(0.5, 0.125), (2.0, 1.5), (1.0, 0.5), (-1.0, 0.5), (0.0, 0.0)])
def test_smooth_l1(x, expected):
    assert smooth_l1(x) == pytest.approx(expected)


def test_smooth_l1_is_continuous_at_one():
    for side in (1.0, -1.0):
        assert smooth_l1(side * (1 - 1e-9)) == pytest.approx(smooth_l1(side * (1 + 1e-9)), abs=1e-8)


def test_smooth_l1_grad_matches_finite_differences(rng):
    x = rng.uniform(-3, 3, 200)
    x = x[np.abs(np.abs(x) - 1) > 1e-3]
    numeric = (smooth_l1(x + H) - smooth_l1(x - H)) / (2 * H)
    np.testing.assert_allclose(smooth_l1_grad(x), numeric, rtol=1e-4, atol=1e-8)
    assert smooth_l1_grad(0.5) == 0.5
    assert smooth_l1_grad(-4.0) == -1.0


def test_loss_ratio():
    region = np.zeros((3, 3), dtype=bool)
    region[1, 1] = region[1, 2] = True
    train = np.ones((3, 3), dtype=bool)
    target = np.where(region, 2.0, 0.0)
    assert loss_ratio(target, target, region, train) == 0.0
    pred = target.copy()
    pred[1, 1] += 0.5
    assert loss_ratio(pred, target, region, train) == pytest.approx(0.125)
    assert loss_ratio(pred, target, region, train, normalize=True) == pytest.approx(0.0625)
    assert loss_ratio(pred, target, np.zeros_like(region), train) == 0.0


def test_loss_weights():
    weights = LossWeights()
    assert (weights.complete, weights.central, weights.ratio) == tuple(settings.LOSS_WEIGHTS) == (0.5, 0.25, 0.25)
    equal = LossWeights.normalized(0.333, 0.333, 0.333)
    assert equal.complete == pytest.approx(1 / 3)
    with pytest.raises(ValidationError):
        LossWeights(complete=0.5, central=0.5, ratio=0.5)
    with pytest.raises(ValidationError):
        LossWeights(complete=1.5, central=-0.25, ratio=-0.25)


def test_total_loss_is_linear():
    assert total_loss(0.0, 0.0, 0.0).total == 0.0
    report = total_loss(0.4, 0.2, 2.0)
    assert report.total == pytest.approx(0.5 * 0.4 + 0.25 * 0.2 + 0.25 * 2.0)
    doubled = total_loss(0.8, 0.4, 4.0)
    assert doubled.total == pytest.approx(2 * report.total)


def test_compute_losses_on_perfect_and_noisy_predictions():
    labels = generate_labels([instance(rect(4, 4, 28, 14)), instance(rect(4, 18, 20, 28))], 32, 32, RatioSampler.fixed(0.5))
    perfect = compute_losses(*synth_predictions(labels), labels)
    assert perfect.total == 0.0
    assert perfect.ohem_selected > np.count_nonzero(labels.full_mask)

    noisy = compute_losses(*synth_predictions(labels, NoiseConfig(prob_noise_sigma=0.2, ratio_noise_sigma=0.5)), labels)
    assert noisy.total > 0
    assert 0 <= noisy.complete <= 1
    assert 0 <= noisy.central <= 1
