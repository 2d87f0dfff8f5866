import numpy as np
import pytest
from hypothesis import given, strategies as st

from platewatch.detector import DetectorConfig, detect_plates, edge_map, extend_roi
from platewatch.imaging import BBox
from platewatch.synth import render_plate


def scene_with(plates, size=(512, 160)):
    frame = np.full((size[1], size[0]), 128, dtype=np.uint8)
    truth = []
    for text, (x, y) in plates:
        p = render_plate(text)
        frame[y : y + p.shape[0], x : x + p.shape[1]] = p
        truth.append(BBox(x, y, p.shape[1], p.shape[0]))
    return frame, truth


def test_uniform_frame_has_no_candidates():
    assert detect_plates(np.full((120, 300), 77, dtype=np.uint8)) == []


def test_single_plate_is_found():
    frame, (truth,) = scene_with([("TS09UB8902", (150, 60))])
    cands = detect_plates(frame)
    assert cands and max(c.box.iou(truth) for c in cands) >= 0.5
    assert cands[0].box.iou(truth) >= 0.8


def test_two_plates_two_candidates():
    frame, truth = scene_with([("KA51MD4182", (20, 15)), ("TS09UB8902", (270, 100))])
    cands = detect_plates(frame, DetectorConfig(max_candidates=2))
    assert len(cands) == 2
    assert cands[0].score >= cands[1].score
    for t in truth:
        assert max(c.box.iou(t) for c in cands) >= 0.5


def test_output_is_lawful_and_deterministic():
    rng = np.random.default_rng(3)
    frame, _ = scene_with([("KA51MD4182", (40, 40))])
    frame = np.clip(frame + rng.normal(0, 10, frame.shape), 0, 255).astype(np.uint8)
    cfg = DetectorConfig()
    a, b = detect_plates(frame, cfg), detect_plates(frame.copy(), cfg)
    assert a == b
    for c in a:
        assert c.box.fits(frame.shape[1], frame.shape[0])
        assert cfg.aspect_min <= c.box.w / c.box.h <= cfg.aspect_max
        assert 0 <= c.score <= 1


def test_frame_smaller_than_minimum():
    assert detect_plates(np.zeros((10, 30), dtype=np.uint8)) == []


def test_edge_map_is_full_central_difference():
    row = np.array([[0, 0, 40, 40, 40]], dtype=np.uint8)
    assert edge_map(row, 40).tolist() == [[False, True, True, False, False]]
    assert not edge_map(row, 41).any()


@pytest.mark.parametrize(
    "kwargs", [dict(min_w=7), dict(min_h=3), dict(aspect_min=0.5), dict(aspect_min=6, aspect_max=6), dict(max_candidates=0)]
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        DetectorConfig(**kwargs)


def test_extend_roi_examples():
    assert extend_roi(BBox(100, 50, 80, 30), 1920, 1080) == BBox(80, 50, 120, 30)
    assert extend_roi(BBox(10, 50, 80, 30), 1920, 1080) == BBox(0, 50, 110, 30)
    assert extend_roi(BBox(1850, 50, 70, 30), 1920, 1080) == BBox(1830, 50, 90, 30)


@st.composite
def box_in_frame(draw):
    fw, fh = draw(st.integers(1, 400)), draw(st.integers(1, 300))
    x, y = draw(st.integers(0, fw - 1)), draw(st.integers(0, fh - 1))
    w, h = draw(st.integers(1, fw - x)), draw(st.integers(1, fh - y))
    return BBox(x, y, w, h), fw, fh


@given(box_in_frame())
def test_extend_roi_contains_and_fits(args):
    box, fw, fh = args
    out = extend_roi(box, fw, fh)
    assert out.contains(box) and out.fits(fw, fh) and out.w >= box.w
    assert (out.y, out.h) == (box.y, box.h)
