"""Plate localisation by horizontal edge density.

Plate text produces dense vertical strokes, so the horizontal gradient lights
up over the plate. Closing with a wide, short element fuses the strokes of
one plate into a single blob whose bounding box is the candidate region.
Any callable with the signature of :func:`detect_plates` can stand in for it
(e.g. a learned detector).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from scipy import ndimage

from .imaging import BBox

ROI_EXTENSION_PX = 20
# 15 wide, 3 tall: bridges the widest edge-free run inside a glyph (14 px,
# the bottom bar of L) so one plate closes into one blob
_CLOSING_ELEMENT = np.ones((3, 15), dtype=bool)


@dataclass(frozen=True)
class DetectorConfig:
    min_w: int = 40
    min_h: int = 12
    aspect_min: float = 2.0
    aspect_max: float = 6.0
    edge_threshold: int = 40
    max_candidates: int = 4

    def __post_init__(self):
        if self.min_w < 8 or self.min_h < 4:
            raise ValueError("minimum plate size is 8x4")
        if not 1 <= self.aspect_min < self.aspect_max:
            raise ValueError("need 1 <= aspect_min < aspect_max")
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be >= 1")


@dataclass(frozen=True)
class PlateCandidate:
    box: BBox
    score: float


Detector = Callable[[np.ndarray, DetectorConfig], List[PlateCandidate]]


def edge_map(frame: np.ndarray, threshold: int) -> np.ndarray:
    """Pixels where ``|I[x+1] - I[x-1]|`` reaches ``threshold``."""
    src = frame.astype(np.int16)
    grad = np.zeros(frame.shape, dtype=np.int16)
    grad[:, 1:-1] = np.abs(src[:, 2:] - src[:, :-2])
    return grad >= threshold


def detect_plates(frame: np.ndarray, cfg: DetectorConfig = DetectorConfig()) -> list[PlateCandidate]:
    h, w = frame.shape
    if w < cfg.min_w or h < cfg.min_h:
        return []
    edges = edge_map(frame, cfg.edge_threshold)
    closed = ndimage.binary_dilation(edges, structure=_CLOSING_ELEMENT)
    closed = ndimage.binary_erosion(closed, structure=_CLOSING_ELEMENT, border_value=1)
    labels, _ = ndimage.label(closed, structure=np.ones((3, 3), dtype=bool))

    found = []
    for sl in ndimage.find_objects(labels):
        if sl is None:
            continue
        ys, xs = sl
        box = BBox(xs.start, ys.start, xs.stop - xs.start, ys.stop - ys.start)
        if box.w < cfg.min_w or box.h < cfg.min_h:
            continue
        if not cfg.aspect_min <= box.w / box.h <= cfg.aspect_max:
            continue
        score = float(edges[sl].mean())
        found.append(PlateCandidate(box, score))
    found.sort(key=lambda c: (-c.score, c.box.y, c.box.x))
    return found[: cfg.max_candidates]


def extend_roi(box: BBox, frame_w: int, frame_h: int) -> BBox:
    """Widen a plate box by 20 px on the left and right, clamped to the frame."""
    left = max(0, box.x - ROI_EXTENSION_PX)
    right = min(frame_w, box.right + ROI_EXTENSION_PX)
    return BBox(left, box.y, right - left, box.h)
