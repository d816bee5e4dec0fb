import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mural.discrepancy import (
    FeatureMatrix,
    WindowSizeError,
    default_ridge,
    extract_features,
    fourier_resample,
    normal_discrepancy,
    windows,
)
from mural.wavelet import mdwd
from oracles import brute_discrepancy


def test_windows_hand_example():
    x = np.arange(10.0)
    left, right, center = windows(x, i=4, w=3)
    assert np.array_equal(left[0], [2.0, 3.0, 4.0])
    assert np.array_equal(right[0], [5.0, 6.0, 7.0])
    assert np.array_equal(center[0], [2.0, 3.0, 4.0, 5.0, 6.0, 7.0])


def test_windows_inadmissible_index():
    x = np.arange(10.0)
    with pytest.raises(ValueError, match="inadmissible"):
        windows(x, i=1, w=3)
    with pytest.raises(ValueError, match="inadmissible"):
        windows(x, i=7, w=3)
    # extremes are fine
    windows(x, i=2, w=3)
    windows(x, i=6, w=3)


def test_step_window_hand_score():
    # two constant halves differing in level: variance only in the center fit
    x = np.array([0.0, 0.0, 1.0, 1.0])
    scores = normal_discrepancy(x, w=2, eps=1e-6)
    expected = 2.0 * math.log((0.25 + 1e-6) / 1e-6)
    assert scores[0] == scores[2] == scores[3] == 0.0  # boundary indices
    assert math.isclose(scores[1], expected, rel_tol=1e-12)
    assert round(scores[1], 2) == 24.86


def test_discrepancy_matches_brute_force():
    rng = np.random.default_rng(0)
    for d in (1, 2, 3):
        x = rng.normal(size=(d, 40))
        x[:, 20:] += 2.0
        got = normal_discrepancy(x, w=5, eps=1e-6, clip=False)
        want = brute_discrepancy([list(ch) for ch in x], w=5, eps=1e-6)
        assert np.allclose(got, want, atol=1e-8, rtol=1e-10)


def test_discrepancy_constant_signal_is_zero():
    scores = normal_discrepancy(np.full((2, 50), 3.0), w=5, eps=1e-6)
    assert np.array_equal(scores, np.zeros(50))


def test_discrepancy_shift_invariance():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(2, 80))
    a = normal_discrepancy(x, w=6, eps=1e-6)
    b = normal_discrepancy(x + 123.456, w=6, eps=1e-6)
    assert np.allclose(a, b, atol=1e-9, rtol=0)


def test_discrepancy_validation():
    x = np.random.default_rng(2).normal(size=30)
    with pytest.raises(WindowSizeError, match="max admissible w is 15"):
        normal_discrepancy(x, w=16, eps=1e-6)
    with pytest.raises(ValueError, match="ridge"):
        normal_discrepancy(x, w=5, eps=0.0)
    with pytest.raises(ValueError, match=">= 2"):
        normal_discrepancy(x, w=1, eps=1e-6)


@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_discrepancy_preclip_nearly_nonnegative(d, w, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(d, 6 * w)) * rng.uniform(0.1, 10.0)
    raw = normal_discrepancy(x, w=w, eps=1e-6, clip=False)
    assert raw.min() >= -1e-9


def test_fourier_resample_identity_and_constant():
    v = np.random.default_rng(3).normal(size=64)
    assert np.allclose(fourier_resample(v, 64), v, atol=1e-10, rtol=0)
    c = np.full(40, 2.5)
    up = fourier_resample(c, 100)
    assert np.allclose(up, 2.5, atol=1e-10, rtol=0)


def test_fourier_resample_pure_tone_exact():
    # a tone below the target Nyquist is reproduced exactly on the finer grid
    n, target, cycles = 50, 150, 4
    t = np.arange(n) / n
    tt = np.arange(target) / target
    v = np.sin(2 * np.pi * cycles * t)
    up = fourier_resample(v, target)
    assert np.allclose(up, np.sin(2 * np.pi * cycles * tt), atol=1e-9, rtol=0)


@settings(max_examples=40)
@given(st.integers(8, 120), st.integers(8, 120), st.integers(0, 2**32 - 1))
def test_fourier_resample_preserves_mean(n, target, seed):
    v = np.random.default_rng(seed).normal(size=n)
    out = fourier_resample(v, target)
    assert out.shape == (target,)
    assert abs(out.mean() - v.mean()) <= 1e-9


def test_extract_features_shape_and_nonnegativity():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(2, 512))
    x[:, 250:] += 3.0
    bands = mdwd(x, levels=3)
    feats = extract_features(bands, w=8, n=512)
    assert feats.features.shape == (4, 512)
    assert feats.features.min() >= 0.0
    assert feats.window_size == 8
    assert len(feats.regularization) == 4
    # the change around index 250 should dominate each coarse row's mass
    assert feats.features[3, 230:270].max() > feats.features[3, :200].max()


def test_extract_features_shift_invariance():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(1, 256))
    f1 = extract_features(mdwd(x, 2), w=6, n=256, eps=1e-6)
    f2 = extract_features(mdwd(x + 7.0, 2), w=6, n=256, eps=1e-6)
    assert np.allclose(f1.features, f2.features, atol=1e-9, rtol=0)


def test_extract_features_reports_offending_band():
    x = np.random.default_rng(6).normal(size=(1, 128))
    bands = mdwd(x, levels=4)  # detail 4 and the approximation have 8 samples
    with pytest.raises(WindowSizeError, match="detail 4"):
        extract_features(bands, w=5, n=128)


def test_default_ridge_tracks_scale():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(2, 200))
    small, big = default_ridge(x), default_ridge(100.0 * x)
    assert big - 1e-12 == pytest.approx((small - 1e-12) * 1e4, rel=1e-9)
    assert default_ridge(np.zeros((1, 50))) == 1e-12


def test_feature_matrix_validation():
    with pytest.raises(ValueError, match="non-negative"):
        FeatureMatrix(np.array([[-1.0, 0.0]]), window_size=2, regularization=(1e-6,))
    with pytest.raises(ValueError, match="per feature row"):
        FeatureMatrix(np.zeros((2, 4)), window_size=2, regularization=(1e-6,))
