"""Frame selection: stride sampling plus stationary-plate suppression.

A vehicle is assumed to stay in view for at least half a second, so visiting
every ``floor(fps / 2)``-th frame cannot miss it. Of a run of visits that all
see the plate in the same place, only the first is kept.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .detector import Detector, DetectorConfig, PlateCandidate, detect_plates
from .errors import BadFps
from .imaging import BBox

log = logging.getLogger(__name__)

DEFAULT_IOU_MIN = 0.7


@dataclass
class FrameCursor:
    fps: int
    f_no: int = 0
    prev_loc: Optional[BBox] = None

    def __post_init__(self):
        if self.fps < 2:
            raise BadFps(f"fps must be >= 2, got {self.fps}")


@dataclass(frozen=True)
class SelectedFrame:
    frame_index: int
    candidates: list[PlateCandidate] = field(default_factory=list)
    timestamp_s: float = 0.0

    @property
    def best(self) -> PlateCandidate:
        return self.candidates[0]


def stride_for(fps: int) -> int:
    if fps < 2:
        raise BadFps(f"fps must be >= 2, got {fps}")
    return fps // 2


def is_stationary(loc: BBox, prev_loc: BBox, iou_min: float = DEFAULT_IOU_MIN) -> bool:
    if not 0 < iou_min <= 1:
        raise ValueError(f"iou_min must lie in (0, 1], got {iou_min}")
    return loc.iou(prev_loc) >= iou_min


def iter_selected(
    frames: Sequence[Optional[np.ndarray]],
    fps: int,
    detect: Detector = detect_plates,
    cfg: DetectorConfig = DetectorConfig(),
    iou_min: float = DEFAULT_IOU_MIN,
) -> Iterator[tuple[SelectedFrame, np.ndarray]]:
    """Yield each selected frame together with its pixels.

    ``frames`` is only indexed at visited positions, so a lazily loading
    sequence reads just those files. A ``None`` entry marks an unreadable
    frame; it is skipped without touching the cursor.
    """
    cursor = FrameCursor(fps)
    stride = stride_for(fps)
    n = len(frames)
    while cursor.f_no < n:
        index = cursor.f_no
        cursor.f_no += stride
        frame = frames[index]
        if frame is None:
            continue
        candidates = detect(frame, cfg)
        if not candidates:
            cursor.prev_loc = None
            continue
        loc = candidates[0].box
        stationary = cursor.prev_loc is not None and is_stationary(loc, cursor.prev_loc, iou_min)
        cursor.prev_loc = loc
        if stationary:
            log.debug("frame %d: plate at rest, skipped", index)
            continue
        yield SelectedFrame(index, list(candidates), index / fps), frame


def select_frames(
    frames: Sequence[Optional[np.ndarray]],
    fps: int,
    detect: Detector = detect_plates,
    cfg: DetectorConfig = DetectorConfig(),
    iou_min: float = DEFAULT_IOU_MIN,
) -> list[SelectedFrame]:
    if len(frames) == 0:
        raise ValueError("no frames to select from")
    return [sel for sel, _ in iter_selected(frames, fps, detect, cfg, iou_min)]
