"""Template-matching OCR over the embedded glyph atlas.

A plate is binarised with Otsu's threshold, split into 4-connected ink
components, and each component is matched against the 36 atlas glyphs by
normalised cross-correlation. The raw reading is then passed through the
plate-format corrector. Any ``(image) -> (text, confidence)`` callable can be
passed as ``ocr`` to replace the template matcher.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Optional

import numpy as np
from scipy import ndimage

from . import font
from .errors import BlankGlyph, NoGlyphs, PlateFormatError
from .imaging import BBox, read_netpbm, resize_bilinear, write_netpbm
from .plate_format import DEFAULT_TABLE, AnalogTable, correct, normalize
from .transformer import TransformVariant, expand

MIN_GLYPH_AREA = 20
MIN_HEIGHT_RATIO = 0.4
# a side-touching component this tall relative to the image and this solid
# is road or plate border, not a character (densest glyph, 0, fills 71%)
SIDE_BLOB_HEIGHT = 0.8
SIDE_BLOB_FILL = 0.85
_FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)

OCR = Callable[[np.ndarray], "tuple[str, float]"]


class GlyphAtlas:
    """36 reference glyphs, black ink on white, 16 wide by 24 tall."""

    def __init__(self, symbols: str, bitmaps: np.ndarray):
        if len(symbols) != 36 or bitmaps.shape != (36, font.GLYPH_H, font.GLYPH_W):
            raise ValueError("atlas needs exactly 36 glyphs of 16x24")
        ink = (bitmaps < 128).mean(axis=(1, 2))
        if ink.min() < 0.10:
            raise ValueError(f"glyph {symbols[int(ink.argmin())]!r} has under 10% ink")
        self.symbols = symbols
        self.bitmaps = bitmaps.astype(np.uint8)
        self._unit = _unit_rows(self.bitmaps.reshape(36, -1))

    def __len__(self) -> int:
        return len(self.symbols)

    def glyph(self, symbol: str) -> np.ndarray:
        return self.bitmaps[self.symbols.index(symbol)].copy()

    def scores(self, glyph_vectors: np.ndarray) -> np.ndarray:
        """Map each row of 384 pixel values to 36 scores in [0, 1]."""
        ncc = _unit_rows(glyph_vectors) @ self._unit.T
        return np.clip((ncc + 1.0) / 2.0, 0.0, 1.0)

    def to_bytes(self) -> bytes:
        return b"".join(write_netpbm(b) for b in self.bitmaps)

    @classmethod
    def from_bytes(cls, data: bytes, symbols: str = font.SYMBOLS) -> "GlyphAtlas":
        one = len(write_netpbm(np.zeros((font.GLYPH_H, font.GLYPH_W), np.uint8)))
        if len(data) != one * len(symbols):
            raise ValueError(f"atlas blob is {len(data)} bytes, expected {one * len(symbols)}")
        cells = [read_netpbm(data[i * one : (i + 1) * one]) for i in range(len(symbols))]
        return cls(symbols, np.stack(cells))


def _unit_rows(rows: np.ndarray) -> np.ndarray:
    v = rows.astype(np.float64)
    v = v - v.mean(axis=1, keepdims=True)
    norm = np.linalg.norm(v, axis=1, keepdims=True)
    return np.divide(v, norm, out=np.zeros_like(v), where=norm > 0)


@functools.lru_cache(maxsize=1)
def default_atlas() -> GlyphAtlas:
    data = resources.files("platewatch").joinpath("data/atlas.pgm").read_bytes()
    return GlyphAtlas.from_bytes(data)


@dataclass(frozen=True)
class RecognitionCandidate:
    raw_text: str
    corrected_text: Optional[str]
    confidence: float
    variant: TransformVariant


# -- binarisation and segmentation ---------------------------------------------


def otsu_threshold(img: np.ndarray) -> Optional[int]:
    """Threshold t maximising between-class variance (class 0 is v <= t);
    None when the image holds a single intensity."""
    hist = np.bincount(img.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)
    s0 = np.cumsum(hist * levels)
    w1 = total - w0
    valid = (w0 > 0) & (w1 > 0)
    if not valid.any():
        return None
    mu0 = np.divide(s0, w0, out=np.zeros(256), where=w0 > 0)
    mu1 = np.divide(s0[-1] - s0, w1, out=np.zeros(256), where=w1 > 0)
    between = np.where(valid, w0 * w1 * (mu0 - mu1) ** 2, -1.0)
    return int(np.argmax(between))


def binarize_otsu(img: np.ndarray) -> np.ndarray:
    """Ink becomes 0 and background 255; whichever side of the threshold is
    smaller is taken to be ink."""
    t = otsu_threshold(img)
    out = np.full(img.shape, 255, dtype=np.uint8)
    if t is None:
        return out
    dark = img <= t
    ink = dark if dark.sum() * 2 <= dark.size else ~dark
    out[ink] = 0
    return out


def _components(ink: np.ndarray, drop_side_touching: bool = False) -> list[tuple[BBox, np.ndarray]]:
    """Filtered ink components as (box, boolean mask cropped to the box), left to right."""
    labels, n = ndimage.label(ink, structure=_FOUR_CONNECTED)
    if n == 0:
        return []
    areas = np.bincount(labels.ravel())
    h, w = ink.shape
    found = []
    for k, sl in enumerate(ndimage.find_objects(labels), start=1):
        ys, xs = sl
        bh, bw = ys.stop - ys.start, xs.stop - xs.start
        blob = bh >= SIDE_BLOB_HEIGHT * h and areas[k] >= SIDE_BLOB_FILL * bh * bw
        if drop_side_touching and blob and (xs.start == 0 or xs.stop == w):
            continue
        found.append((k, BBox(xs.start, ys.start, xs.stop - xs.start, ys.stop - ys.start), sl))
    if not found:
        return []
    tallest = max(box.h for _, box, _ in found)
    kept = [
        (box, labels[sl] == k)
        for k, box, sl in found
        if box.h >= MIN_HEIGHT_RATIO * tallest and areas[k] >= MIN_GLYPH_AREA
    ]
    kept.sort(key=lambda item: (item[0].x, item[0].y))
    return kept


def segment_glyphs(binary: np.ndarray) -> list[BBox]:
    """Boxes of the glyph-sized ink components of a binarised plate."""
    boxes = [box for box, _ in _components(binary < 128)]
    if not boxes:
        raise NoGlyphs("no glyph-sized ink components")
    return boxes


# -- classification -------------------------------------------------------------


def _glyph_vector(glyph: np.ndarray) -> np.ndarray:
    return resize_bilinear(glyph, font.GLYPH_W, font.GLYPH_H).reshape(-1)


def classify_glyph(glyph: np.ndarray, atlas: Optional[GlyphAtlas] = None) -> tuple[str, float]:
    atlas = atlas or default_atlas()
    if not (glyph < 128).any():
        raise BlankGlyph("glyph has no ink")
    scores = atlas.scores(_glyph_vector(glyph)[None, :])[0]
    best = int(np.argmax(scores))  # first maximum, i.e. atlas order
    return atlas.symbols[best], float(scores[best])


def _read_components(comps: list[tuple[BBox, np.ndarray]], atlas: GlyphAtlas) -> tuple[str, float]:
    vectors = np.stack([_glyph_vector(np.where(mask, 0, 255).astype(np.uint8)) for _, mask in comps])
    scores = atlas.scores(vectors)
    best = scores.argmax(axis=1)
    text = "".join(atlas.symbols[i] for i in best)
    return text, float(scores[np.arange(len(best)), best].mean())


def recognize(plate: np.ndarray, atlas: Optional[GlyphAtlas] = None) -> tuple[str, float]:
    """Read a plate image into (raw text, mean glyph score).

    Solid, nearly full-height components touching the left or right edge
    are road around the plate rather than characters and are dropped. Both ink polarities are
    tried and the more confident reading wins, which keeps crops that are
    mostly surrounding road from flipping the ink/background decision.
    """
    atlas = atlas or default_atlas()
    h, w = plate.shape
    if w < 8 or h < 4:
        raise NoGlyphs(f"plate {w}x{h} is smaller than 8x4")
    binary = binarize_otsu(plate)
    best: Optional[tuple[str, float]] = None
    for ink in (binary == 0, binary != 0):
        comps = _components(ink, drop_side_touching=True)
        if not comps:
            continue
        reading = _read_components(comps, atlas)
        if best is None or reading[1] > best[1]:
            best = reading
    if best is None:
        raise NoGlyphs("no glyph-sized ink components")
    return best


def recognize_candidates(
    plate: np.ndarray,
    atlas: Optional[GlyphAtlas] = None,
    table: AnalogTable = DEFAULT_TABLE,
    ocr: Optional[OCR] = None,
) -> list[RecognitionCandidate]:
    """Read every transformer view of the plate, best first."""
    if ocr is None:
        atlas = atlas or default_atlas()
        ocr = functools.partial(recognize, atlas=atlas)
    ranked = []
    for index, (variant, view) in enumerate(expand(plate)):
        try:
            raw, confidence = ocr(view)
        except NoGlyphs:
            continue
        try:
            corrected: Optional[str] = correct(normalize(raw), table).corrected
        except PlateFormatError:
            corrected = None
        ranked.append((index, RecognitionCandidate(raw, corrected, confidence, variant)))
    if not ranked:
        raise NoGlyphs("no transformer view produced glyphs")
    ranked.sort(key=lambda item: (item[1].corrected_text is None, -item[1].confidence, item[0]))
    return [cand for _, cand in ranked]
