import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motionboost.booster import (BoosterParams, OperatorCache, apply_operator, boost_clip,
                                 boost_pyramid, fuse, truncate_alpha)
from motionboost.errors import (DegenerateLengthError, PyramidDepthError, RangeError,
                                ShapeError, ValidationError)
from motionboost.interpolate import build_interpolation_matrix, oracle_interpolate
from motionboost.magnify import MagnifyParams, build_magnification_matrix, oracle_magnify
from motionboost.numcore import Clip
from motionboost.operators import OperatorMatrix


def _identity(role, t):
    return OperatorMatrix(np.eye(t), role, None, t, t)


def test_fuse_identities():
    w = fuse(_identity("magnify", 4), _identity("interpolate", 4))
    assert w.role == "fused" and np.array_equal(w.matrix, np.eye(4))


def test_fuse_identity_degeneration():
    wm = build_magnification_matrix(MagnifyParams(0.0, 0.4, 0.05), 9)
    w = fuse(wm, build_interpolation_matrix(9, 9))
    assert np.max(np.abs(w.matrix - np.eye(9))) <= 1e-9


def test_fuse_matches_sequential_oracles(rng):
    p = MagnifyParams(12.0, 0.6, 0.15)
    clip = Clip(6, 5, 1, rng.random((30, 7)))
    w = fuse(build_magnification_matrix(p, 7), build_interpolation_matrix(7, 10))
    separate = oracle_interpolate(oracle_magnify(clip, p), 10)
    assert np.max(np.abs(apply_operator(clip, w).values - separate.values)) <= 1e-8


def test_fuse_rejects_mismatch():
    wm = build_magnification_matrix(MagnifyParams(), 5)
    with pytest.raises(ShapeError):
        fuse(wm, build_interpolation_matrix(4, 6))
    with pytest.raises(ShapeError):
        fuse(build_interpolation_matrix(5, 5), wm)


def test_apply_identity_bit_identical(rng):
    clip = Clip(3, 3, 1, rng.random((9, 6)))
    out = apply_operator(clip, _identity("fused", 6))
    assert np.array_equal(out.values, clip.values)


def test_apply_constant_clip():
    clip = Clip(2, 2, 1, np.full((4, 8), 0.25))
    p = MagnifyParams()
    w = fuse(build_magnification_matrix(p, 8), build_interpolation_matrix(8, 13))
    out = apply_operator(clip, w)
    assert out.frames == 13
    assert np.allclose(out.values, 0.25, atol=1e-12)


def test_apply_single_pixel_magnify():
    out = apply_operator(Clip.from_signal([0.0, 1.0, 1.0]),
                         build_magnification_matrix(MagnifyParams(1.0, 0.5, 0.25), 3))
    assert out.values.ravel().tolist() == [0.0, 1.25, 1.3125]


def test_apply_frame_mismatch():
    with pytest.raises(ShapeError):
        apply_operator(Clip.from_signal([1.0, 2.0]), _identity("fused", 3))


def test_boost_identity_levels_one(rng):
    clip = Clip(8, 6, 1, rng.random((48, 7)))
    p = BoosterParams(MagnifyParams(0.0, 0.4, 0.05), out_len=7)
    assert np.max(np.abs(boost_clip(clip, p).values - clip.values)) <= 1e-6


def test_boost_identity_through_pyramid(rng):
    clip = Clip(40, 33, 1, rng.random((40 * 33, 6)))
    p = BoosterParams(MagnifyParams(0.0, 0.4, 0.05), out_len=6, levels=3, min_dim=8)
    assert np.max(np.abs(boost_clip(clip, p).values - clip.values)) <= 1e-6


@pytest.mark.parametrize("levels", [1, 2, 3])
def test_boost_constant_clip(levels):
    clip = Clip(32, 32, 1, np.full((32 * 32, 5), 0.4))
    out = boost_clip(clip, BoosterParams(out_len=9, levels=levels, min_dim=8))
    assert out.frames == 9
    assert np.allclose(out.values, 0.4, atol=1e-9)


def test_boost_rgb(rng):
    clip = Clip(32, 24, 3, rng.random((32 * 24 * 3, 4)))
    out = boost_clip(clip, BoosterParams(out_len=6, levels=2, min_dim=8))
    assert out.channels == 3 and out.frames == 6


def test_boost_levels_one_equals_fused_operator(rng):
    p = BoosterParams(MagnifyParams(16, 0.4, 0.05), out_len=10)
    clip = Clip(5, 5, 1, rng.random((25, 8)))
    w = fuse(build_magnification_matrix(p.magnify, 8), build_interpolation_matrix(8, 10))
    assert np.array_equal(boost_clip(clip, p).values, apply_operator(clip, w).values)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 64), st.integers(2, 40), st.integers(1, 40), st.floats(0, 32),
       st.floats(0.02, 0.98), st.floats(0.01, 0.97), st.integers(0, 2**32 - 1))
def test_consolidation_equivalence(d, t, t_out, alpha, w1, frac, seed):
    p = MagnifyParams(alpha, w1, w1 * frac)
    clip = Clip(d, 1, 1, np.random.default_rng(seed).random((d, t)))
    out = boost_clip(clip, BoosterParams(p, out_len=t_out))
    ref = oracle_interpolate(oracle_magnify(clip, p), t_out)
    assert np.max(np.abs(out.values - ref.values)) <= 1e-8


def test_clip_level_associativity(rng):
    p = MagnifyParams(20, 0.5, 0.1)
    clip = Clip(10, 1, 1, rng.random((10, 12)))
    wm = build_magnification_matrix(p, 12)
    wi = build_interpolation_matrix(12, 17)
    two_step = apply_operator(apply_operator(clip, wm), wi).values
    one_step = apply_operator(clip, fuse(wm, wi)).values
    assert np.max(np.abs(two_step - one_step)) <= 1e-9


def test_mag_only_degeneration(rng):
    p = MagnifyParams(8, 0.4, 0.05)
    clip = Clip(4, 1, 1, rng.random((4, 9)))
    out = boost_clip(clip, BoosterParams(p, out_len=9))
    assert np.max(np.abs(out.values - oracle_magnify(clip, p).values)) <= 1e-9


def test_tim_only_degeneration(rng):
    clip = Clip(4, 1, 1, rng.random((4, 9)))
    out = boost_clip(clip, BoosterParams(MagnifyParams(0.0, 0.4, 0.05), out_len=14))
    assert np.max(np.abs(out.values - oracle_interpolate(clip, 14).values)) <= 1e-9


def test_frame_one_anchored(rng):
    clip = Clip(6, 1, 1, rng.random((6, 11)))
    out = boost_clip(clip, BoosterParams(MagnifyParams(30, 0.7, 0.2), out_len=11))
    assert np.max(np.abs(out.values[:, 0] - clip.values[:, 0])) <= 1e-9


def test_pyramid_linearity_with_equal_operators(rng):
    clip = Clip(48, 40, 1, rng.random((48 * 40, 8)))
    w = fuse(build_magnification_matrix(MagnifyParams(16, 0.4, 0.05), 8),
             build_interpolation_matrix(8, 12))
    flat = boost_pyramid(clip, [w])
    stacked = boost_pyramid(clip, [w, w, w], min_dim=4)
    assert np.max(np.abs(flat.values - stacked.values)) <= 1e-5


def test_boost_errors():
    with pytest.raises(DegenerateLengthError):
        boost_clip(Clip.from_signal([1.0]), BoosterParams())
    clip = Clip(20, 20, 1, np.zeros((400, 4)))
    with pytest.raises(PyramidDepthError):
        boost_clip(clip, BoosterParams(levels=3, min_dim=16))


def test_truncate_default_rule():
    p = BoosterParams(MagnifyParams(16, 0.4, 0.05), levels=6)
    # wavelength 4 * 2**s px, bound (4 * 2**s) / 8 - 1, residual forced to 0
    assert [truncate_alpha(p, s) for s in range(6)] == [0.0, 0.0, 1.0, 3.0, 7.0, 0.0]


def test_truncate_caps_and_zero():
    p = BoosterParams(MagnifyParams(16, 0.4, 0.05), levels=3, alpha_caps=[16, 16, 16])
    assert [truncate_alpha(p, s) for s in range(2)] == [16.0, 16.0]
    assert truncate_alpha(p, 2) == 0.0
    p0 = BoosterParams(MagnifyParams(0, 0.4, 0.05), levels=3)
    assert [truncate_alpha(p0, s) for s in range(3)] == [0.0, 0.0, 0.0]


def test_truncate_single_level_keeps_alpha():
    assert truncate_alpha(BoosterParams(MagnifyParams(16, 0.4, 0.05)), 0) == 16.0
    capped = BoosterParams(MagnifyParams(16, 0.4, 0.05), alpha_caps=[5])
    assert truncate_alpha(capped, 0) == 5.0


def test_truncate_range():
    with pytest.raises(RangeError):
        truncate_alpha(BoosterParams(levels=2), 2)


def test_params_validation():
    with pytest.raises(ValidationError):
        BoosterParams(levels=2, alpha_caps=[1.0])
    with pytest.raises(ValidationError):
        BoosterParams(alpha_caps=[-1.0])
    with pytest.raises(ValidationError):
        BoosterParams(out_len=0)


def test_cache_reuses_and_persists(tmp_path):
    cache = OperatorCache(tmp_path)
    p = MagnifyParams()
    w = cache.fused(12, 10, p)
    assert cache.fused(12, 10, p) is w and len(cache) == 1
    assert len(list(tmp_path.glob("*.mebw"))) == 1
    warm = OperatorCache(tmp_path).fused(12, 10, p)
    assert warm.matrix.tobytes() == w.matrix.tobytes()


@pytest.mark.parametrize("threads", [1, 2, 4])
def test_threads_bit_identical(rng, threads):
    clip = Clip(40, 36, 1, rng.random((1440, 9)))
    p = BoosterParams(out_len=13, levels=2, min_dim=8)
    assert np.array_equal(boost_clip(clip, p, threads=threads).values, boost_clip(clip, p).values)
