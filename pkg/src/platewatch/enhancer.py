"""Plate quality enhancement and the matching degradation simulator.

The built-in enhancer is the classical chain: median filter, percentile
contrast stretch, then a resize to a fixed 64 px height. Anything mapping a
gray image to a gray image can be used in its place.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import TooSmall
from .imaging import contrast_stretch, gaussian_blur, median3x3, median_filter, resize_bilinear

ENHANCED_HEIGHT = 64

Enhancer = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GaussianBlur:
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("gaussian blur sigma must be positive")


@dataclass(frozen=True)
class MedianBlur:
    k: int

    def __post_init__(self):
        if self.k < 3 or self.k % 2 == 0:
            raise ValueError("median blur size must be odd and >= 3")


Blur = Optional[Union[GaussianBlur, MedianBlur]]


@dataclass(frozen=True)
class DegradeSpec:
    noise_sigma: float = 0.0
    blur: Blur = None
    contrast_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0 < self.contrast_scale <= 1:
            raise ValueError("contrast_scale must lie in (0, 1]")

    def with_seed(self, seed: int) -> "DegradeSpec":
        return DegradeSpec(self.noise_sigma, self.blur, self.contrast_scale, seed)


def enhance(plate: np.ndarray) -> np.ndarray:
    h, w = plate.shape
    if w < 8 or h < 4:
        raise TooSmall(f"plate {w}x{h} is smaller than 8x4")
    out = contrast_stretch(median3x3(plate), 2, 98)
    new_w = max(8, int(math.floor(w * ENHANCED_HEIGHT / h + 0.5)))
    return resize_bilinear(out, new_w, ENHANCED_HEIGHT)


def passthrough(plate: np.ndarray) -> np.ndarray:
    """Enhancer that leaves the plate untouched."""
    return plate


def gaussian_noise(shape: tuple[int, ...], sigma: float, seed: int) -> np.ndarray:
    """Box-Muller normal samples from a PCG64 stream seeded with ``seed``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(np.prod(shape))
    u1 = 1.0 - rng.random(n)  # (0, 1], keeps log finite
    u2 = rng.random(n)
    z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
    return (sigma * z).reshape(shape)


def degrade(img: np.ndarray, spec: DegradeSpec) -> np.ndarray:
    """Contrast compression, optional blur, then additive Gaussian noise."""
    out = img
    if spec.contrast_scale != 1.0:
        v = 128.0 + (img.astype(np.float64) - 128.0) * spec.contrast_scale
        out = np.clip(np.floor(v + 0.5), 0, 255).astype(np.uint8)
    if isinstance(spec.blur, GaussianBlur):
        out = gaussian_blur(out, spec.blur.sigma)
    elif isinstance(spec.blur, MedianBlur):
        out = median_filter(out, spec.blur.k)
    if spec.noise_sigma > 0:
        noisy = out.astype(np.float64) + gaussian_noise(out.shape, spec.noise_sigma, spec.seed)
        out = np.clip(np.floor(noisy + 0.5), 0, 255).astype(np.uint8)
    return out if out is not img else img.copy()
