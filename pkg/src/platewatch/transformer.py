"""The fixed set of 20 rotate-and-trim views of a plate.

Five rotations spanning +-12 degrees at a 6 degree pitch, crossed with four
border trims spanning 0-25 px. Rotation happens first so the trim removes
the filled corners it leaves behind.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import TooSmall
from .imaging import rotate, shrink_border

ROTATIONS = (-12.0, -6.0, 0.0, 6.0, 12.0)
CROPS = (0, 8, 17, 25)


class TransformVariant(NamedTuple):
    rotation_deg: float
    crop_px: int


_VARIANTS = tuple(TransformVariant(r, c) for r in ROTATIONS for c in CROPS)
IDENTITY = TransformVariant(0.0, 0)


def variant_set() -> list[TransformVariant]:
    return list(_VARIANTS)


def effective_crop(crop_px: int, width: int, height: int) -> int:
    """Trim actually applied; small plates get at most a quarter of their short side."""
    return min(crop_px, min(width, height) // 4)


def apply(plate: np.ndarray, v: TransformVariant) -> np.ndarray:
    h, w = plate.shape
    crop = effective_crop(v.crop_px, w, h)
    if w - 2 * crop < 8 or h - 2 * crop < 4:
        raise TooSmall(f"plate {w}x{h} too small for variant {v}")
    return shrink_border(rotate(plate, v.rotation_deg), crop)


def expand(plate: np.ndarray) -> list[tuple[TransformVariant, np.ndarray]]:
    h, w = plate.shape
    if w < 8 or h < 4:
        raise TooSmall(f"plate {w}x{h} is smaller than 8x4")
    return [(v, apply(plate, v)) for v in _VARIANTS]
