"""RGB -> HSV conversion and 72-level HSV quantization.

Hue is split into 8 bins, saturation and value into 3 bins each, and the
bins are packed as ``C = 9*H + 3*S + V``.  Scalar functions follow the
conversion branch by branch; the ``*_array`` variants perform the same
double-precision arithmetic elementwise so both paths agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import ForegroundMask, ImageBuffer

ACHROMATIC = -1.0
MASKED = -1

HUE_BINS = 8
SAT_BINS = 3
VAL_BINS = 3
N_COLORS = HUE_BINS * SAT_BINS * VAL_BINS  # 72

# lower edges of hue bins 1..7; bin 0 wraps around [316, 360) u [0, 20)
HUE_EDGES = (20.0, 40.0, 75.0, 155.0, 190.0, 270.0, 295.0, 316.0)
# right-closed upper edges of S/V bins 0 and 1
SV_EDGES = (0.2, 0.7)


@dataclass(frozen=True)
class HsvColor:
    h: float  # degrees in [0, 360), or ACHROMATIC
    s: float
    v: float

    @property
    def achromatic(self) -> bool:
        return self.h == ACHROMATIC


@dataclass(frozen=True)
class QuantizedColor:
    c: int

    def __post_init__(self):
        if not 0 <= self.c < N_COLORS:
            raise ValueError(f"quantized color out of range: {self.c}")

    @classmethod
    def from_bins(cls, h: int, s: int, v: int) -> QuantizedColor:
        return cls(pack_bins(h, s, v))

    @property
    def bins(self) -> tuple[int, int, int]:
        return unpack_bins(self.c)


def pack_bins(h: int, s: int, v: int) -> int:
    if not (0 <= h < HUE_BINS and 0 <= s < SAT_BINS and 0 <= v < VAL_BINS):
        raise ValueError(f"bins out of range: {(h, s, v)}")
    return SAT_BINS * VAL_BINS * h + VAL_BINS * s + v


def unpack_bins(c: int) -> tuple[int, int, int]:
    h, rest = divmod(c, SAT_BINS * VAL_BINS)
    s, v = divmod(rest, VAL_BINS)
    return h, s, v


def rgb_to_hsv(r: int, g: int, b: int) -> HsvColor:
    r, g, b = r / 255.0, g / 255.0, b / 255.0
    mx = max(r, g, b)
    mn = min(r, g, b)
    v = mx
    delta = mx - mn
    s = 0.0 if mx == 0 else delta / mx
    if mx == mn:
        h = ACHROMATIC
    else:
        if r == mx and g != mn:
            h = 60 * (g - b) / delta
        elif r == mx and g == mn:
            h = 360 + 60 * (g - b) / delta
        elif g == mx:
            h = 60 * (2.0 + (b - r) / delta)
        else:
            h = 60 * (4.0 + (r - g) / delta)
        if h == 360.0:
            h = 0.0
    return HsvColor(h, s, v)


def quantize_hue(h: float) -> int:
    if h == ACHROMATIC:
        return 0
    if 20 <= h < 40:
        return 1
    if 40 <= h < 75:
        return 2
    if 75 <= h < 155:
        return 3
    if 155 <= h < 190:
        return 4
    if 190 <= h < 270:
        return 5
    if 270 <= h < 295:
        return 6
    if 295 <= h < 316:
        return 7
    # [316, 360) and [0, 20)
    return 0


def _quantize_unit(x: float) -> int:
    if x <= 0.2:
        return 0
    if x <= 0.7:
        return 1
    return 2


def quantize_sat(s: float) -> int:
    return _quantize_unit(s)


def quantize_val(v: float) -> int:
    return _quantize_unit(v)


def quantize_hsv(color: HsvColor) -> QuantizedColor:
    return QuantizedColor.from_bins(
        quantize_hue(color.h), quantize_sat(color.s), quantize_val(color.v)
    )


def quantize_pixel(r: int, g: int, b: int) -> QuantizedColor:
    return quantize_hsv(rgb_to_hsv(r, g, b))


# --- vectorised path ---------------------------------------------------------


def rgb_to_hsv_array(rgb) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Elementwise ``rgb_to_hsv`` over an (..., 3) integer array."""
    rgb = np.asarray(rgb)
    r = rgb[..., 0] / 255.0
    g = rgb[..., 1] / 255.0
    b = rgb[..., 2] / 255.0
    mx = np.maximum(np.maximum(r, g), b)
    mn = np.minimum(np.minimum(r, g), b)
    delta = mx - mn
    chroma = delta != 0
    safe_mx = np.where(mx == 0, 1.0, mx)
    s = np.where(mx == 0, 0.0, delta / safe_mx)
    d = np.where(chroma, delta, 1.0)

    r_max = r == mx
    g_max = g == mx
    g_min = g == mn
    with np.errstate(invalid="ignore", divide="ignore"):
        h = np.where(
            r_max & ~g_min,
            60 * (g - b) / d,
            np.where(
                r_max & g_min,
                360 + 60 * (g - b) / d,
                np.where(g_max, 60 * (2.0 + (b - r) / d), 60 * (4.0 + (r - g) / d)),
            ),
        )
    h = np.where(h == 360.0, 0.0, h)
    h = np.where(chroma, h, ACHROMATIC)
    return h, s, mx


def quantize_hue_array(h) -> np.ndarray:
    # side="right" puts each edge value into the bin it opens; 316 lands in 8 -> 0
    bins = np.searchsorted(np.asarray(HUE_EDGES), h, side="right") % HUE_BINS
    return np.where(np.asarray(h) == ACHROMATIC, 0, bins)


def quantize_unit_array(x) -> np.ndarray:
    # side="left" keeps 0.2 and 0.7 in the lower (right-closed) bin
    return np.searchsorted(np.asarray(SV_EDGES), x, side="left")


def quantize_rgb_array(rgb) -> np.ndarray:
    """Quantized index ``C`` for every pixel of an (..., 3) array (int16)."""
    h, s, v = rgb_to_hsv_array(rgb)
    c = (
        SAT_BINS * VAL_BINS * quantize_hue_array(h)
        + VAL_BINS * quantize_unit_array(s)
        + quantize_unit_array(v)
    )
    return c.astype(np.int16)


@dataclass(frozen=True, eq=False)
class QuantizedImage:
    """Per-pixel quantized color, ``cells[y, x]`` in [0, 71] or ``MASKED``."""

    width: int
    height: int
    cells: np.ndarray

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.int16, copy=True).reshape(self.height, self.width)
        if cells.size and (cells.min() < MASKED or cells.max() >= N_COLORS):
            raise ValueError("cells must be in [0, 71] or MASKED")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_array(cls, arr) -> QuantizedImage:
        arr = np.asarray(arr)
        return cls(arr.shape[1], arr.shape[0], arr)

    def __eq__(self, other):
        if not isinstance(other, QuantizedImage):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and np.array_equal(
            self.cells, other.cells
        )


def quantize_image(img: ImageBuffer, mask: ForegroundMask | None = None) -> QuantizedImage:
    if mask is None:
        bits = np.ones((img.height, img.width), dtype=bool)
    else:
        if (mask.width, mask.height) != (img.width, img.height):
            raise ValueError(
                f"mask is {mask.width}x{mask.height} but image is {img.width}x{img.height}"
            )
        bits = mask.bits
    cells = quantize_rgb_array(img.pixels)
    cells = np.where(bits, cells, MASKED)
    return QuantizedImage(img.width, img.height, cells)
