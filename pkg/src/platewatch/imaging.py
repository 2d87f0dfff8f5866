"""Raster primitives on uint8 numpy arrays.

Gray images are ``(h, w)`` arrays and colour images ``(h, w, 3)`` arrays in
R, G, B channel order. Every filter pads by replicating edge pixels and
rounds half up when converting back to bytes.
"""
from __future__ import annotations

import math
import re
from pathlib import Path
from typing import NamedTuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import BadMagic, OutOfBounds, TooSmall, TruncatedData, UnsupportedMaxval

PathLike = Union[str, Path]


class BBox(NamedTuple):
    x: int
    y: int
    w: int
    h: int

    @property
    def area(self) -> int:
        return self.w * self.h

    @property
    def right(self) -> int:
        return self.x + self.w

    @property
    def bottom(self) -> int:
        return self.y + self.h

    def contains(self, other: "BBox") -> bool:
        return (
            self.x <= other.x
            and self.y <= other.y
            and other.right <= self.right
            and other.bottom <= self.bottom
        )

    def fits(self, width: int, height: int) -> bool:
        return self.x >= 0 and self.y >= 0 and self.right <= width and self.bottom <= height

    def iou(self, other: "BBox") -> float:
        iw = min(self.right, other.right) - max(self.x, other.x)
        ih = min(self.bottom, other.bottom) - max(self.y, other.y)
        if iw <= 0 or ih <= 0:
            return 0.0
        inter = iw * ih
        return inter / (self.area + other.area - inter)


def _to_u8(values: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


# -- netpbm ------------------------------------------------------------------

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def read_netpbm(data: bytes) -> np.ndarray:
    """Parse a binary P5 (gray) or P6 (colour) image with maxval 255."""
    if data[:2] not in (b"P5", b"P6"):
        raise BadMagic(f"unsupported netpbm magic {data[:2]!r}")
    pos = 2
    fields = []
    for _ in range(3):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise TruncatedData("incomplete netpbm header")
        fields.append(m.group(1))
        pos = m.end()
    try:
        width, height, maxval = (int(f) for f in fields)
    except ValueError as exc:
        raise TruncatedData(f"malformed netpbm header: {exc}") from None
    if maxval != 255:
        raise UnsupportedMaxval(f"maxval {maxval} (only 255 is supported)")
    if width < 1 or height < 1:
        raise TruncatedData(f"bad dimensions {width}x{height}")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    channels = 1 if data[:2] == b"P5" else 3
    size = width * height * channels
    raster = data[pos : pos + size]
    if len(raster) < size:
        raise TruncatedData(f"expected {size} raster bytes, got {len(raster)}")
    arr = np.frombuffer(raster, dtype=np.uint8)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return arr.reshape(shape).copy()


def write_netpbm(img: np.ndarray) -> bytes:
    """Serialize with the canonical header ``P5\\n<w> <h>\\n255\\n`` (or P6)."""
    img = np.ascontiguousarray(img, dtype=np.uint8)
    if img.ndim == 2:
        magic = b"P5"
    elif img.ndim == 3 and img.shape[2] == 3:
        magic = b"P6"
    else:
        raise ValueError(f"cannot encode array of shape {img.shape}")
    h, w = img.shape[:2]
    return magic + f"\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def load_image(path: PathLike) -> np.ndarray:
    return read_netpbm(Path(path).read_bytes())


def save_image(path: PathLike, img: np.ndarray) -> None:
    Path(path).write_bytes(write_netpbm(img))


# -- point operations ----------------------------------------------------------


def to_gray(img: np.ndarray) -> np.ndarray:
    """BT.601 luma of an RGB image."""
    rgb = img.astype(np.float64)
    return _to_u8(0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2])


def percentile(img: np.ndarray, pct: float) -> int:
    """Nearest-rank percentile of the pixel multiset."""
    flat = np.sort(img, axis=None)
    rank = math.ceil(pct / 100.0 * flat.size)
    rank = min(max(rank, 1), flat.size)
    return int(flat[rank - 1])


def contrast_stretch(img: np.ndarray, lo_pct: float = 2.0, hi_pct: float = 98.0) -> np.ndarray:
    if not 0 <= lo_pct < hi_pct <= 100:
        raise ValueError(f"need 0 <= lo_pct < hi_pct <= 100, got {lo_pct}, {hi_pct}")
    lo = percentile(img, lo_pct)
    hi = percentile(img, hi_pct)
    if lo == hi:
        return img.copy()
    return _to_u8(255.0 * (img.astype(np.float64) - lo) / (hi - lo))


# -- neighbourhood filters -----------------------------------------------------


def median_filter(img: np.ndarray, k: int) -> np.ndarray:
    """k x k median with edge-replicate padding (k odd)."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"median kernel must be odd and positive, got {k}")
    r = k // 2
    padded = np.pad(img, r, mode="edge")
    windows = sliding_window_view(padded, (k, k)).reshape(img.shape + (k * k,))
    return np.partition(windows, k * k // 2, axis=-1)[..., k * k // 2].astype(np.uint8)


def median3x3(img: np.ndarray) -> np.ndarray:
    return median_filter(img, 3)


def gaussian_kernel(sigma: float) -> np.ndarray:
    radius = math.ceil(3 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2 * sigma * sigma))
    return k / k.sum()


def _convolve_axis(values: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    r = len(kernel) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (r, r)
    padded = np.pad(values, pad, mode="edge")
    n = values.shape[axis]
    out = np.zeros(values.shape, dtype=np.float64)
    for i, weight in enumerate(kernel):
        out += weight * np.take(padded, np.arange(i, i + n), axis=axis)
    return out


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    kernel = gaussian_kernel(sigma)
    out = _convolve_axis(img.astype(np.float64), kernel, axis=1)
    out = _convolve_axis(out, kernel, axis=0)
    return _to_u8(out)


# -- geometry ----------------------------------------------------------------


def sample_bilinear(img: np.ndarray, sx: np.ndarray, sy: np.ndarray) -> np.ndarray:
    """Bilinear lookup at float coordinates, clamped to the image (edge replicate)."""
    h, w = img.shape
    sx = np.clip(sx, 0, w - 1)
    sy = np.clip(sy, 0, h - 1)
    x0 = np.floor(sx).astype(np.intp)
    y0 = np.floor(sy).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = sx - x0
    fy = sy - y0
    src = img.astype(np.float64)
    top = src[y0, x0] * (1 - fx) + src[y0, x1] * fx
    bottom = src[y1, x0] * (1 - fx) + src[y1, x1] * fx
    return top * (1 - fy) + bottom * fy


def resize_bilinear(img: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    if new_w < 1 or new_h < 1:
        raise ValueError(f"target size must be positive, got {new_w}x{new_h}")
    h, w = img.shape
    if (new_w, new_h) == (w, h):
        return img.copy()
    xs = (np.arange(new_w) + 0.5) * (w / new_w) - 0.5
    ys = (np.arange(new_h) + 0.5) * (h / new_h) - 0.5
    sx, sy = np.meshgrid(xs, ys)
    return _to_u8(sample_bilinear(img, sx, sy))


def rotation_source(
    width: int, height: int, degrees: float, src_w: int, src_h: int
) -> tuple[np.ndarray, np.ndarray]:
    """Source coordinates for every pixel of a ``width x height`` output that
    shows a ``src_w x src_h`` image turned counter-clockwise by ``degrees``
    about the shared centre."""
    theta = math.radians(degrees)
    c, s = math.cos(theta), math.sin(theta)
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    dx = xs - (width - 1) / 2.0
    dy = ys - (height - 1) / 2.0
    sx = (src_w - 1) / 2.0 + c * dx - s * dy
    sy = (src_h - 1) / 2.0 + s * dx + c * dy
    return sx, sy


def rotate(img: np.ndarray, degrees: float) -> np.ndarray:
    """Rotate counter-clockwise about the centre, keeping the input size."""
    if degrees == 0:
        return img.copy()
    h, w = img.shape
    sx, sy = rotation_source(w, h, degrees, w, h)
    return _to_u8(sample_bilinear(img, sx, sy))


def crop(img: np.ndarray, box: BBox) -> np.ndarray:
    h, w = img.shape[:2]
    if box.w < 1 or box.h < 1 or not box.fits(w, h):
        raise OutOfBounds(f"{box} outside {w}x{h} image")
    return img[box.y : box.bottom, box.x : box.right].copy()


def shrink_border(img: np.ndarray, px: int) -> np.ndarray:
    h, w = img.shape[:2]
    if px < 0 or 2 * px >= w or 2 * px >= h:
        raise TooSmall(f"cannot remove {px} px border from {w}x{h} image")
    if px == 0:
        return img.copy()
    return img[px : h - px, px : w - px].copy()
