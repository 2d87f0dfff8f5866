"""End-to-end processing of recorded clips into the detection store.

Stage order per clip: frame selection and plate detection, ROI extension,
crop, enhancement, the 20-view transform, recognition with format
correction, then one stored detection per plate candidate.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .detector import Detector, DetectorConfig, detect_plates, extend_roi
from .enhancer import Enhancer, enhance, passthrough
from .errors import PlateWatchError
from .imaging import crop, load_image, to_gray
from .matcher import DEFAULT_THRESHOLD, Detection, store_append
from .recognizer import OCR, GlyphAtlas, recognize_candidates
from .selector import DEFAULT_IOU_MIN, iter_selected

log = logging.getLogger(__name__)

PathLike = Union[str, Path]
TRACE_STAGES = ("select", "detect", "extend_roi", "crop", "enhance", "transform", "recognize", "correct")

ENHANCERS: dict[str, Enhancer] = {"builtin": enhance, "none": passthrough}


@dataclass
class PipelineConfig:
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    iou_min: float = DEFAULT_IOU_MIN
    threshold: int = DEFAULT_THRESHOLD
    enhancer: str = "builtin"
    store: Optional[Path] = None
    # injection seams for learned stand-ins
    detect: Detector = detect_plates
    ocr: Optional[OCR] = None
    atlas: Optional[GlyphAtlas] = None

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")
        if not 0 < self.iou_min <= 1:
            raise ValueError("iou_min must lie in (0, 1]")
        if self.enhancer not in ENHANCERS:
            raise ValueError(f"unknown enhancer {self.enhancer!r}; choose from {sorted(ENHANCERS)}")


@dataclass(frozen=True)
class VideoManifest:
    video_id: str
    camera_id: str
    fps: int
    frames: list[Path]
    start_epoch_s: Optional[float] = None

    @classmethod
    def load(cls, path: PathLike) -> "VideoManifest":
        path = Path(path)
        obj = json.loads(path.read_text(encoding="utf-8"))
        try:
            return cls(
                video_id=str(obj["video_id"]),
                camera_id=str(obj["camera_id"]),
                fps=int(obj["fps"]),
                frames=[path.parent / f for f in obj["frames"]],
                start_epoch_s=obj.get("start_epoch_s"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: bad manifest: {exc}") from None

    def timestamp(self, frame_index: int) -> float:
        t = frame_index / self.fps
        return t + self.start_epoch_s if self.start_epoch_s is not None else t


class LazyFrames(Sequence):
    """Frames of a clip read on access; unreadable files come back as None."""

    def __init__(self, paths: Sequence[Path]):
        self._paths = list(paths)

    def __len__(self) -> int:
        return len(self._paths)

    def __getitem__(self, index):
        path = self._paths[index]
        try:
            img = load_image(path)
        except (OSError, ValueError) as exc:
            log.warning("skipping unreadable frame %s: %s", path, exc)
            return None
        return to_gray(img) if img.ndim == 3 else img


def analyze_video(
    manifest: VideoManifest,
    cfg: PipelineConfig = PipelineConfig(),
    on_trace: Optional[Callable[[dict], None]] = None,
) -> list[Detection]:
    """Run every stage over one clip and return its detections in frame order."""
    improve = ENHANCERS[cfg.enhancer]
    detections = []
    selected = iter_selected(LazyFrames(manifest.frames), manifest.fps, cfg.detect, cfg.detector, cfg.iou_min)
    for sel, frame in selected:
        h, w = frame.shape
        for cand in sel.candidates:
            roi = extend_roi(cand.box, w, h)
            try:
                plate = improve(crop(frame, roi))
                readings = recognize_candidates(plate, cfg.atlas, ocr=cfg.ocr)
            except (PlateWatchError, ValueError) as exc:
                log.info("%s frame %d box %s: %s", manifest.video_id, sel.frame_index, cand.box, exc)
                continue
            det = Detection(
                camera_id=manifest.camera_id,
                video_id=manifest.video_id,
                frame_index=sel.frame_index,
                timestamp_s=manifest.timestamp(sel.frame_index),
                box=cand.box,
                candidates=readings,
            )
            detections.append(det)
            if on_trace is not None:
                top = readings[0]
                on_trace(
                    {
                        "video_id": manifest.video_id,
                        "frame_index": sel.frame_index,
                        "stages": list(TRACE_STAGES),
                        "box": cand.box._asdict(),
                        "roi": roi._asdict(),
                        "detector_score": cand.score,
                        "enhanced_size": [int(plate.shape[1]), int(plate.shape[0])],
                        "variants_read": len(readings),
                        "winning_variant": {
                            "rotation_deg": top.variant.rotation_deg,
                            "crop_px": top.variant.crop_px,
                        },
                        "raw_text": top.raw_text,
                        "best_text": det.best_text,
                    }
                )
    return detections


def process(
    manifest: Union[VideoManifest, PathLike],
    cfg: PipelineConfig,
    store: PathLike,
    trace: Optional[PathLike] = None,
) -> int:
    """Append the detections of one clip to ``store``; returns how many."""
    return process_many([manifest], cfg, store, trace)


def process_many(
    manifests: Iterable[Union[VideoManifest, PathLike]],
    cfg: PipelineConfig,
    store: PathLike,
    trace: Optional[PathLike] = None,
    workers: int = 1,
) -> int:
    """Analyse clips (in parallel when ``workers`` > 1) and append their
    detections in manifest order through a single writer."""
    loaded = [m if isinstance(m, VideoManifest) else VideoManifest.load(m) for m in manifests]

    def run(m: VideoManifest) -> tuple[list[Detection], list[dict]]:
        records: list[dict] = []
        return analyze_video(m, cfg, records.append if trace else None), records

    if workers > 1 and len(loaded) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, loaded))
    else:
        results = [run(m) for m in loaded]

    Path(store).touch()
    count = 0
    for detections, records in results:
        for det in detections:
            store_append(store, det)
            count += 1
        if trace:
            with open(trace, "a", encoding="utf-8") as fh:
                for rec in records:
                    fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
    return count


def frames_of(manifest: VideoManifest) -> list[Optional[np.ndarray]]:
    """Eagerly load every frame of a clip (for inspection and tests)."""
    lazy = LazyFrames(manifest.frames)
    return [lazy[i] for i in range(len(lazy))]
