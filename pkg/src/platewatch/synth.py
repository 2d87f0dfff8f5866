"""Synthetic plates, scenes and corpora with exact ground truth.

Plates are drawn with the same atlas the recognizer matches against, so an
undegraded, unrotated plate reads back exactly. Scenes move one plate across
a textured gray road and record its true box in every frame.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import font
from .enhancer import DegradeSpec, GaussianBlur, MedianBlur, degrade
from .errors import SpecInvalid
from .imaging import BBox, sample_bilinear, resize_bilinear, rotation_source, save_image
from .plate_format import random_plate, validate

GLYPH_SPACING = 4
PLATE_MARGIN = 8
BACKGROUND = 128
DEFAULT_FPS = 25


def plate_size(n_chars: int) -> tuple[int, int]:
    w = 2 * PLATE_MARGIN + n_chars * font.GLYPH_W + (n_chars - 1) * GLYPH_SPACING
    return w, 2 * PLATE_MARGIN + font.GLYPH_H


def render_plate(text: str) -> np.ndarray:
    """Black atlas glyphs on a white plate."""
    bitmaps = font.atlas_bitmaps()
    w, h = plate_size(len(text))
    plate = np.full((h, w), 255, dtype=np.uint8)
    for i, c in enumerate(text):
        x = PLATE_MARGIN + i * (font.GLYPH_W + GLYPH_SPACING)
        plate[PLATE_MARGIN : PLATE_MARGIN + font.GLYPH_H, x : x + font.GLYPH_W] = bitmaps[
            font.SYMBOLS.index(c)
        ]
    return plate


def rotated_patch(plate: np.ndarray, degrees: float) -> tuple[np.ndarray, np.ndarray]:
    """The plate turned counter-clockwise, on its bounding canvas, with a
    coverage mask marking which canvas pixels belong to the plate."""
    if degrees == 0:
        return plate.copy(), np.ones(plate.shape, dtype=bool)
    h, w = plate.shape
    t = math.radians(degrees)
    cw = math.ceil(abs(w * math.cos(t)) + abs(h * math.sin(t)))
    ch = math.ceil(abs(w * math.sin(t)) + abs(h * math.cos(t)))
    sx, sy = rotation_source(cw, ch, degrees, w, h)
    mask = (sx >= -0.5) & (sx <= w - 0.5) & (sy >= -0.5) & (sy <= h - 0.5)
    values = np.clip(np.floor(sample_bilinear(plate, sx, sy) + 0.5), 0, 255).astype(np.uint8)
    return values, mask


def tilted_plate(text: str, degrees: float, background: int = BACKGROUND) -> np.ndarray:
    """A rendered plate rotated by ``degrees`` and set on flat road gray."""
    patch, mask = rotated_patch(render_plate(text), degrees)
    return np.where(mask, patch, np.uint8(background))


def background_texture(width: int, height: int, seed: int, amplitude: float = 6.0) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    coarse = 128.0 + rng.uniform(-amplitude, amplitude, size=(height // 16 + 2, width // 16 + 2))
    return resize_bilinear(np.clip(np.floor(coarse + 0.5), 0, 255).astype(np.uint8), width, height)


@dataclass(frozen=True)
class SceneSpec:
    """One camera clip with a single plate.

    ``path`` holds (frame_index, (cx, cy)) waypoints of the plate centre;
    positions between waypoints are linearly interpolated and held constant
    beyond the ends. ``presence`` is the half-open frame range [first, stop)
    in which the plate is visible.
    """

    plate_text: str
    frame_size: tuple[int, int]
    n_frames: int
    path: Sequence[tuple[int, tuple[float, float]]]
    plate_rotation_deg: float = 0.0
    degrade: DegradeSpec = field(default_factory=DegradeSpec)
    presence: tuple[int, int] = (0, 0)

    def centre_at(self, frame_index: int) -> tuple[float, float]:
        frames = [f for f, _ in self.path]
        xs = [p[0] for _, p in self.path]
        ys = [p[1] for _, p in self.path]
        return float(np.interp(frame_index, frames, xs)), float(np.interp(frame_index, frames, ys))


@dataclass
class GroundTruth:
    plate_text: str
    presence: tuple[int, int]
    boxes: dict[int, BBox] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "plate_text": self.plate_text,
            "presence": list(self.presence),
            "boxes": [
                {"frame_index": f, "x": b.x, "y": b.y, "w": b.w, "h": b.h}
                for f, b in sorted(self.boxes.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GroundTruth":
        boxes = {b["frame_index"]: BBox(b["x"], b["y"], b["w"], b["h"]) for b in obj["boxes"]}
        return cls(obj["plate_text"], tuple(obj["presence"]), boxes)


def _check_scene(spec: SceneSpec) -> None:
    first, stop = spec.presence
    if spec.n_frames < 1 or not 0 <= first <= stop <= spec.n_frames:
        raise SpecInvalid(f"presence {spec.presence} outside [0, {spec.n_frames})")
    if not spec.path:
        raise SpecInvalid("scene path has no waypoints")
    frames = [f for f, _ in spec.path]
    if any(b <= a for a, b in zip(frames, frames[1:])):
        raise SpecInvalid("waypoints must be strictly increasing in frame index")
    if not -12 <= spec.plate_rotation_deg <= 12:
        raise SpecInvalid("plate rotation must lie within +-12 degrees")
    try:
        validate(spec.plate_text)
    except ValueError as exc:
        raise SpecInvalid(f"bad plate text: {exc}") from None


def make_scene(spec: SceneSpec) -> tuple[list[np.ndarray], GroundTruth]:
    _check_scene(spec)
    fw, fh = spec.frame_size
    patch, mask = rotated_patch(render_plate(spec.plate_text), spec.plate_rotation_deg)
    ph, pw = patch.shape
    ys, xs = np.nonzero(mask)
    tight = BBox(int(xs.min()), int(ys.min()), int(xs.max() - xs.min() + 1), int(ys.max() - ys.min() + 1))
    road = background_texture(fw, fh, spec.degrade.seed)

    truth = GroundTruth(spec.plate_text, spec.presence)
    frames = []
    for f in range(spec.n_frames):
        frame = road.copy()
        if spec.presence[0] <= f < spec.presence[1]:
            cx, cy = spec.centre_at(f)
            x0 = int(math.floor(cx - pw / 2 + 0.5))
            y0 = int(math.floor(cy - ph / 2 + 0.5))
            if x0 < 0 or y0 < 0 or x0 + pw > fw or y0 + ph > fh:
                raise SpecInvalid(f"plate leaves the frame at frame {f}")
            region = frame[y0 : y0 + ph, x0 : x0 + pw]
            region[mask] = patch[mask]
            truth.boxes[f] = BBox(x0 + tight.x, y0 + tight.y, tight.w, tight.h)
        frame_seed = (spec.degrade.seed * 1_000_003 + f) % (2**63)
        frames.append(degrade(frame, spec.degrade.with_seed(frame_seed)))
    return frames, truth


@dataclass(frozen=True)
class Tier:
    name: str
    degrade: DegradeSpec
    max_rotation_deg: float


TIERS = {
    "clean": Tier("clean", DegradeSpec(), 0.0),
    "mild": Tier("mild", DegradeSpec(6.0, GaussianBlur(0.8), 0.85), 6.0),
    "harsh": Tier("harsh", DegradeSpec(14.0, MedianBlur(3), 0.6), 12.0),
}

CAMERAS = ("cam-01", "cam-02", "cam-03", "cam-04", "cam-05")


@dataclass(frozen=True)
class CorpusEntry:
    manifest: Path
    truth: Path
    video_id: str
    plate_text: str


def gen_corpus(
    n_plates: int,
    seed: int,
    tiers: Sequence[Union[Tier, str]],
    out_dir: Union[str, Path],
    frame_size: tuple[int, int] = (384, 128),
    n_frames: int = 36,
    fps: int = DEFAULT_FPS,
) -> list[CorpusEntry]:
    """Write one moving-plate clip per (plate, tier) under ``out_dir``.

    Each clip directory holds ``manifest.json``, ``truth.json`` and its P5
    frames. Plate texts are distinct 10-character plates.
    """
    if n_plates < 1:
        raise ValueError("n_plates must be >= 1")
    tiers = [TIERS[t] if isinstance(t, str) else t for t in tiers]
    rng = random.Random(seed)
    plates: list[str] = []
    while len(plates) < n_plates:
        text = random_plate(rng, 10)
        if text not in plates:
            plates.append(text)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fw, fh = frame_size
    entries = []
    for i, text in enumerate(plates):
        for tier in tiers:
            rotation = round(rng.uniform(-tier.max_rotation_deg, tier.max_rotation_deg), 2)
            pw, ph = rotated_patch(render_plate(text), rotation)[0].shape[::-1]
            x_lo, x_hi = pw / 2 + 2, fw - pw / 2 - 2
            y_lo, y_hi = ph / 2 + 2, fh - ph / 2 - 2
            if x_lo > x_hi or y_lo > y_hi:
                raise SpecInvalid(f"frame {fw}x{fh} too small for a {pw}x{ph} plate")
            first = rng.randint(0, 4)
            stop = rng.randint(n_frames - 4, n_frames)
            start_x, end_x = (x_lo, x_hi) if rng.random() < 0.5 else (x_hi, x_lo)
            start_y, end_y = rng.uniform(y_lo, y_hi), rng.uniform(y_lo, y_hi)
            spec = SceneSpec(
                plate_text=text,
                frame_size=frame_size,
                n_frames=n_frames,
                path=[(first, (start_x, start_y)), (max(stop - 1, first + 1), (end_x, end_y))],
                plate_rotation_deg=rotation,
                degrade=tier.degrade.with_seed(rng.randrange(2**31)),
                presence=(first, stop),
            )
            video_id = f"{tier.name}-{i:03d}"
            entries.append(
                write_scene(out / video_id, spec, video_id, rng.choice(CAMERAS), fps)
            )
    return entries


def write_scene(
    scene_dir: Path,
    spec: SceneSpec,
    video_id: str,
    camera_id: str,
    fps: int = DEFAULT_FPS,
    start_epoch_s: Optional[float] = None,
) -> CorpusEntry:
    frames, truth = make_scene(spec)
    frame_dir = scene_dir / "frames"
    frame_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for f, frame in enumerate(frames):
        name = f"frames/{f:06d}.pgm"
        save_image(scene_dir / name, frame)
        names.append(name)
    manifest = {"video_id": video_id, "camera_id": camera_id, "fps": fps, "frames": names}
    if start_epoch_s is not None:
        manifest["start_epoch_s"] = start_epoch_s
    manifest_path = scene_dir / "manifest.json"
    truth_path = scene_dir / "truth.json"
    manifest_path.write_text(json.dumps(manifest, indent=1) + "\n")
    truth_path.write_text(json.dumps(truth.to_json(), indent=1) + "\n")
    return CorpusEntry(manifest_path, truth_path, video_id, spec.plate_text)
