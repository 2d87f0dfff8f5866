import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from platewatch.enhancer import (
    ENHANCED_HEIGHT,
    DegradeSpec,
    GaussianBlur,
    MedianBlur,
    degrade,
    enhance,
    gaussian_noise,
    passthrough,
)
from platewatch.errors import TooSmall
from platewatch.synth import render_plate


def test_enhance_constant_plate():
    out = enhance(np.full((20, 60), 128, dtype=np.uint8))
    assert out.shape == (64, 192) and np.all(out == 128)


def test_enhance_stretches_range():
    plate = np.where(render_plate("KA51MD4182") > 127, 200, 50).astype(np.uint8)
    out = enhance(plate)
    assert out.min() == 0 and out.max() == 255


def test_enhance_64_tall_keeps_size():
    plate = np.random.default_rng(0).integers(0, 256, (64, 150), dtype=np.uint8)
    assert enhance(plate).shape == (64, 150)


def test_enhance_width_rounding():
    # 64 * 25 / 10 = 160; 64 * 9 / 8 = 72; tiny widths floor at 8
    assert enhance(np.zeros((10, 25), np.uint8)).shape == (64, 160)
    assert enhance(np.zeros((8, 9), np.uint8)).shape == (64, 72)
    assert enhance(np.zeros((100, 8), np.uint8)).shape == (64, 8)


def test_enhance_too_small():
    with pytest.raises(TooSmall):
        enhance(np.zeros((3, 20), np.uint8))
    with pytest.raises(TooSmall):
        enhance(np.zeros((10, 7), np.uint8))


@given(arrays(np.uint8, st.tuples(st.integers(4, 30), st.integers(8, 60))))
@settings(max_examples=40)
def test_enhance_deterministic_height(img):
    a = enhance(img)
    assert a.shape[0] == ENHANCED_HEIGHT and np.array_equal(a, enhance(img.copy()))


def test_passthrough_is_identity():
    img = np.arange(6, dtype=np.uint8).reshape(2, 3)
    assert passthrough(img) is img


def test_degrade_neutral_is_identity():
    img = np.random.default_rng(1).integers(0, 256, (9, 11), dtype=np.uint8)
    out = degrade(img, DegradeSpec())
    assert np.array_equal(out, img) and out is not img


def test_degrade_contrast_example():
    img = np.array([[0, 255]], dtype=np.uint8)
    # 128 - 64 = 64 and 128 + 63.5 = 191.5, rounded half up to 192
    assert degrade(img, DegradeSpec(contrast_scale=0.5)).tolist() == [[64, 192]]


def test_degrade_seeded():
    img = np.full((30, 40), 128, dtype=np.uint8)
    spec = DegradeSpec(8.0, GaussianBlur(1.0), 0.8, seed=11)
    a, b = degrade(img, spec), degrade(img, spec)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, degrade(img, spec.with_seed(12)))


def test_degrade_median_blur_removes_salt():
    img = np.zeros((9, 9), dtype=np.uint8)
    img[4, 4] = 255
    assert not degrade(img, DegradeSpec(blur=MedianBlur(3))).any()


def test_gaussian_noise_statistics():
    z = gaussian_noise((200, 200), 5.0, seed=3)
    assert abs(z.mean()) < 0.1 and z.std() == pytest.approx(5.0, rel=0.02)
    assert np.array_equal(z, gaussian_noise((200, 200), 5.0, seed=3))


@pytest.mark.parametrize(
    "build",
    [
        lambda: DegradeSpec(noise_sigma=-1),
        lambda: DegradeSpec(contrast_scale=0),
        lambda: DegradeSpec(contrast_scale=1.5),
        lambda: GaussianBlur(0),
        lambda: MedianBlur(4),
        lambda: MedianBlur(1),
    ],
)
def test_spec_validation(build):
    with pytest.raises(ValueError):
        build()
