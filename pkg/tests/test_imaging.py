import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from platewatch.errors import BadMagic, OutOfBounds, TooSmall, TruncatedData, UnsupportedMaxval
from platewatch.imaging import (
    BBox,
    contrast_stretch,
    crop,
    gaussian_blur,
    gaussian_kernel,
    load_image,
    median3x3,
    percentile,
    read_netpbm,
    resize_bilinear,
    rotate,
    save_image,
    shrink_border,
    to_gray,
    write_netpbm,
)

gray_images = arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12)))
rgb_images = arrays(np.uint8, st.tuples(st.integers(1, 8), st.integers(1, 8), st.just(3)))


def test_read_minimal_p5():
    img = read_netpbm(b"P5 2 1 255\n" + bytes([0, 255]))
    assert img.dtype == np.uint8 and img.shape == (1, 2)
    assert img.tolist() == [[0, 255]]


def test_read_skips_comments():
    img = read_netpbm(b"P5\n# made by hand\n2 1\n# max\n255\n\x07\x08")
    assert img.tolist() == [[7, 8]]


def test_write_canonical_header():
    assert write_netpbm(np.array([[7]], dtype=np.uint8)) == b"P5\n1 1\n255\n\x07"
    data = write_netpbm(np.zeros((2, 2, 3), dtype=np.uint8))
    assert data.startswith(b"P6\n2 2\n255\n") and len(data) - len(b"P6\n2 2\n255\n") == 12


@pytest.mark.parametrize(
    "data, err",
    [
        (b"P3 1 1 255\n0 0 0", BadMagic),
        (b"P5 2 2 255\n\x00\x00\x00", TruncatedData),
        (b"P5 1 1 65535\n\x00\x00", UnsupportedMaxval),
        (b"P5 2", TruncatedData),
    ],
)
def test_read_errors(data, err):
    with pytest.raises(err):
        read_netpbm(data)


@given(st.one_of(gray_images, rgb_images))
def test_netpbm_round_trip(img):
    data = write_netpbm(img)
    back = read_netpbm(data)
    assert np.array_equal(back, img)
    assert write_netpbm(back) == data


def test_save_load(tmp_path):
    img = np.arange(12, dtype=np.uint8).reshape(3, 4)
    save_image(tmp_path / "a.pgm", img)
    assert np.array_equal(load_image(tmp_path / "a.pgm"), img)
    with pytest.raises(OSError):
        load_image(tmp_path / "missing.pgm")


def test_to_gray_examples():
    px = np.array([[[255, 255, 255], [0, 0, 0], [255, 0, 0]]], dtype=np.uint8)
    assert to_gray(px).tolist() == [[255, 0, 76]]


def test_percentile_nearest_rank():
    img = np.arange(1, 101, dtype=np.uint8).reshape(10, 10)
    assert percentile(img, 2) == 2
    assert percentile(img, 98) == 98
    assert percentile(img, 0) == 1 and percentile(img, 100) == 100


def test_median3x3_examples():
    const = np.full((5, 7), 91, dtype=np.uint8)
    assert np.array_equal(median3x3(const), const)
    salt = np.zeros((5, 5), dtype=np.uint8)
    salt[2, 2] = 255
    assert not median3x3(salt).any()
    assert median3x3(np.array([[42]], dtype=np.uint8)).tolist() == [[42]]


def test_contrast_stretch_examples():
    img = np.array([[50] * 10 + [200] * 10], dtype=np.uint8)
    assert set(np.unique(contrast_stretch(img, 2, 98))) == {0, 255}
    const = np.full((3, 3), 9, dtype=np.uint8)
    assert np.array_equal(contrast_stretch(const), const)
    full = np.array([[0, 128, 255]], dtype=np.uint8)
    out = contrast_stretch(full, 0, 100)
    assert out[0, 0] == 0 and out[0, 2] == 255


@given(gray_images)
def test_contrast_stretch_monotone(img):
    out = contrast_stretch(img)
    order = np.argsort(img, axis=None, kind="stable")
    assert np.all(np.diff(out.ravel()[order].astype(int)) >= 0)


def test_resize_examples():
    img = np.random.default_rng(0).integers(0, 256, (64, 256), dtype=np.uint8)
    assert np.array_equal(resize_bilinear(img, 256, 64), img)
    const = np.full((5, 9), 77, dtype=np.uint8)
    assert np.all(resize_bilinear(const, 31, 3) == 77)
    ramp = resize_bilinear(np.array([[0, 255]], dtype=np.uint8), 4, 1)[0]
    # half-pixel centres: sources -0.25, 0.25, 0.75, 1.25 clamp to 0, 63.75, 191.25, 255
    assert ramp.tolist() == [0, 64, 191, 255]


def test_rotate_examples():
    img = np.random.default_rng(1).integers(0, 256, (9, 13), dtype=np.uint8)
    assert np.array_equal(rotate(img, 0), img)
    assert np.all(rotate(np.full((6, 10), 33, dtype=np.uint8), 17.5) == 33)
    cross = np.zeros((9, 9), dtype=np.uint8)
    cross[4, :] = 255
    cross[:, 4] = 255
    assert np.array_equal(rotate(cross, 90), cross)


def test_rotate_direction():
    # a dot right of centre moves up under a counter-clockwise turn
    img = np.zeros((9, 9), dtype=np.uint8)
    img[4, 7] = 255
    out = rotate(img, 90)
    assert out[1, 4] == 255 and out[4, 7] == 0


@given(gray_images, st.floats(-180, 180))
@settings(max_examples=50)
def test_filters_keep_shape_and_constants(img, deg):
    for out in (median3x3(img), gaussian_blur(img, 1.3), rotate(img, deg), resize_bilinear(img, 5, 4)):
        assert out.dtype == np.uint8
    assert median3x3(img).shape == img.shape
    assert rotate(img, deg).shape == img.shape
    const = np.full(img.shape, int(img.flat[0]), dtype=np.uint8)
    for out in (median3x3(const), gaussian_blur(const, 2.0), rotate(const, deg)):
        assert np.array_equal(out, const)


def test_crop_examples():
    img = np.arange(20, dtype=np.uint8).reshape(4, 5)
    assert np.array_equal(crop(img, BBox(0, 0, 5, 4)), img)
    assert crop(img, BBox(0, 0, 1, 1)).tolist() == [[0]]
    with pytest.raises(OutOfBounds):
        crop(img, BBox(1, 0, 5, 4))


def test_shrink_border_examples():
    img = np.zeros((40, 100), dtype=np.uint8)
    assert np.array_equal(shrink_border(img, 0), img)
    assert shrink_border(img, 10).shape == (20, 80)
    with pytest.raises(TooSmall):
        shrink_border(np.zeros((40, 40), dtype=np.uint8), 20)


def test_gaussian_kernel():
    k = gaussian_kernel(1.0)
    assert len(k) == 7 and k.sum() == pytest.approx(1.0)
    assert len(gaussian_kernel(0.5)) == 5


def test_gaussian_blur_conserves_blob_mass():
    img = np.zeros((40, 40), dtype=np.uint8)
    img[17:23, 15:25] = 200
    out = gaussian_blur(img, 1.5)
    assert abs(int(out.sum()) - int(img.sum())) <= out.size
    assert abs(int(out.sum()) - int(img.sum())) < 0.02 * img.sum()


def test_gaussian_blur_small_sigma_is_near_identity():
    img = np.random.default_rng(2).integers(0, 256, (20, 20), dtype=np.uint8)
    assert np.abs(gaussian_blur(img, 0.1).astype(int) - img).max() <= 1


def test_bbox_iou():
    assert BBox(0, 0, 100, 100).iou(BBox(50, 0, 100, 100)) == pytest.approx(1 / 3)
    assert BBox(0, 0, 10, 10).iou(BBox(20, 20, 5, 5)) == 0.0
