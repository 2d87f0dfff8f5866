"""Comparing readings to a wanted plate, and the detection store.

Detections are kept one JSON object per line in an append-only file. A query
scans the file and keeps every detection with some candidate reading within
the mismatch threshold of the target.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

from .errors import MalformedRecord, PlateFormatError
from .imaging import BBox
from .plate_format import normalize
from .recognizer import RecognitionCandidate
from .transformer import TransformVariant

DEFAULT_THRESHOLD = 2
REPORT_HEADER = "plate,timestamp_s,camera_id,video_id,frame_index,distance"

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Detection:
    camera_id: str
    video_id: str
    frame_index: int
    timestamp_s: float
    box: BBox
    candidates: list[RecognitionCandidate] = field(default_factory=list)

    @property
    def best_text(self) -> Optional[str]:
        return self.candidates[0].corrected_text if self.candidates else None

    def to_json(self) -> dict:
        return {
            "camera_id": self.camera_id,
            "video_id": self.video_id,
            "frame_index": self.frame_index,
            "timestamp_s": self.timestamp_s,
            "box": self.box._asdict(),
            "candidates": [
                {
                    "raw": c.raw_text,
                    "corrected": c.corrected_text,
                    "confidence": c.confidence,
                    "rotation_deg": c.variant.rotation_deg,
                    "crop_px": c.variant.crop_px,
                }
                for c in self.candidates
            ],
            "best_text": self.best_text,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Detection":
        candidates = [
            RecognitionCandidate(
                c["raw"],
                c["corrected"],
                float(c["confidence"]),
                TransformVariant(float(c["rotation_deg"]), int(c["crop_px"])),
            )
            for c in obj["candidates"]
        ]
        b = obj["box"]
        return cls(
            camera_id=str(obj["camera_id"]),
            video_id=str(obj["video_id"]),
            frame_index=int(obj["frame_index"]),
            timestamp_s=float(obj["timestamp_s"]),
            box=BBox(int(b["x"]), int(b["y"]), int(b["w"]), int(b["h"])),
            candidates=candidates,
        )


@dataclass(frozen=True)
class MatchResult:
    detection: Detection
    distance: int
    matched_candidate: int

    @property
    def matched_text(self) -> str:
        return candidate_text(self.detection.candidates[self.matched_candidate]) or ""


def distance(a: str, b: str) -> int:
    """Positional mismatches over the common prefix length plus the length gap."""
    return sum(x != y for x, y in zip(a, b)) + abs(len(a) - len(b))


def candidate_text(c: RecognitionCandidate) -> Optional[str]:
    if c.corrected_text is not None:
        return c.corrected_text
    try:
        return normalize(c.raw_text)
    except PlateFormatError:
        return None


def match(target: str, det: Detection, threshold: int = DEFAULT_THRESHOLD) -> Optional[MatchResult]:
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    best: Optional[tuple[int, float, int]] = None
    for i, cand in enumerate(det.candidates):
        text = candidate_text(cand)
        if text is None:
            continue
        key = (distance(target, text), -cand.confidence, i)
        if best is None or key < best:
            best = key
    if best is None or best[0] > threshold:
        return None
    return MatchResult(det, best[0], best[2])


def store_append(path: PathLike, det: Detection) -> None:
    line = json.dumps(det.to_json(), separators=(",", ":"))
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(line + "\n")


def iter_store(path: PathLike) -> Iterator[Detection]:
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield Detection.from_json(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise MalformedRecord(line_no, str(exc)) from None


def query(path: PathLike, target: str, threshold: int = DEFAULT_THRESHOLD) -> list[MatchResult]:
    target = normalize(target)
    hits = [m for det in iter_store(path) if (m := match(target, det, threshold)) is not None]
    hits.sort(key=lambda m: (m.detection.video_id, m.detection.timestamp_s))
    return hits


def report(matches: Sequence[MatchResult]) -> list[str]:
    """CSV lines (header first) locating each sighting in time and place."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_HEADER.split(","))
    for m in matches:
        d = m.detection
        writer.writerow(
            [m.matched_text, f"{d.timestamp_s:.2f}", d.camera_id, d.video_id, d.frame_index, m.distance]
        )
    return buf.getvalue().splitlines()
