"""Raster buffers, binary PPM/PGM codec, nearest-neighbour resize and masks."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DecodeError

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _frozen(arr, dtype):
    arr = np.array(arr, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """24-bit RGB raster, ``pixels[y, x] == (r, g, b)``."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        px = np.asarray(self.pixels)
        if px.size != self.width * self.height * 3:
            raise ValueError(
                f"pixel buffer has {px.size} samples, expected {self.width * self.height * 3}"
            )
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("channel values must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(px.reshape(self.height, self.width, 3), np.uint8))

    @classmethod
    def from_array(cls, arr) -> ImageBuffer:
        arr = np.asarray(arr)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected an (H, W, 3) array, got shape {arr.shape}")
        return cls(arr.shape[1], arr.shape[0], arr)

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        r, g, b = self.pixels[y, x]
        return int(r), int(g), int(b)

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and np.array_equal(
            self.pixels, other.pixels
        )


@dataclass(frozen=True, eq=False)
class ForegroundMask:
    """Boolean raster, ``bits[y, x]`` is true for foreground."""

    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"mask dimensions must be positive, got {self.width}x{self.height}")
        bits = np.asarray(self.bits, dtype=bool)
        if bits.size != self.width * self.height:
            raise ValueError(f"mask has {bits.size} bits, expected {self.width * self.height}")
        object.__setattr__(self, "bits", _frozen(bits.reshape(self.height, self.width), bool))

    @classmethod
    def from_array(cls, arr) -> ForegroundMask:
        arr = np.asarray(arr, dtype=bool)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        return cls(arr.shape[1], arr.shape[0], arr)

    def __eq__(self, other):
        if not isinstance(other, ForegroundMask):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and np.array_equal(
            self.bits, other.bits
        )


def full_mask(w: int, h: int) -> ForegroundMask:
    if w <= 0 or h <= 0:
        raise ValueError(f"mask dimensions must be positive, got {w}x{h}")
    return ForegroundMask(w, h, np.ones((h, w), dtype=bool))


# --- PNM codec ---------------------------------------------------------------


def _read_header(data: bytes, count: int):
    """Parse ``count`` whitespace-separated header tokens after the magic.

    Returns the integer values and the offset of the first payload byte.
    """
    pos = 2
    values = []
    n = len(data)
    while len(values) < count:
        while pos < n:
            ch = data[pos]
            if ch in _WHITESPACE:
                pos += 1
            elif ch == ord("#"):
                while pos < n and data[pos] not in b"\r\n":
                    pos += 1
            else:
                break
        if pos >= n:
            raise DecodeError("truncated header", pos)
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise DecodeError(f"invalid header token {token[:16]!r}", start)
        values.append(int(token))
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or data[pos] not in _WHITESPACE:
        raise DecodeError("missing whitespace after header", pos)
    return values, pos + 1


def _decode_pnm(data: bytes, magic: bytes, channels: int) -> tuple[int, int, np.ndarray]:
    data = bytes(data)
    if data[:2] != magic:
        raise DecodeError(f"bad magic {data[:2]!r}, expected {magic!r}", 0)
    (width, height, maxval), offset = _read_header(data, 3)
    if width <= 0 or height <= 0:
        raise DecodeError(f"invalid dimensions {width}x{height}", offset)
    if maxval != 255:
        raise DecodeError(f"unsupported maxval {maxval}, only 255 is accepted", offset)
    need = width * height * channels
    have = len(data) - offset
    if have < need:
        raise DecodeError(f"truncated pixel payload: need {need} bytes, found {have}", len(data))
    raw = np.frombuffer(data, dtype=np.uint8, count=need, offset=offset)
    return width, height, raw


def decode_ppm(data: bytes) -> ImageBuffer:
    """Decode a binary (P6) PPM with maxval 255."""
    width, height, raw = _decode_pnm(data, b"P6", 3)
    return ImageBuffer(width, height, raw)


def encode_ppm(img: ImageBuffer) -> bytes:
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def decode_pgm_mask(data: bytes) -> ForegroundMask:
    """Decode a binary (P5) PGM; nonzero samples are foreground."""
    width, height, raw = _decode_pnm(data, b"P5", 1)
    return ForegroundMask(width, height, raw != 0)


def encode_pgm_mask(mask: ForegroundMask) -> bytes:
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
    return header + (mask.bits.astype(np.uint8) * 255).tobytes()


def _is_pnm(path) -> bool:
    return os.path.splitext(str(path))[1].lower() in (".ppm", ".pgm", ".pnm")


def read_image(path) -> ImageBuffer:
    """Load an RGB image. PPM is decoded natively; other formats go through Pillow."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] == b"P6":
        return decode_ppm(data)
    if _is_pnm(path):
        return decode_ppm(data)  # raises with the offending magic
    from PIL import Image

    with Image.open(path) as im:
        return ImageBuffer.from_array(np.asarray(im.convert("RGB")))


def write_image(path, img: ImageBuffer) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_ppm(img))


def read_mask(path) -> ForegroundMask:
    """Load a foreground mask; any nonzero sample counts as foreground."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] == b"P5":
        return decode_pgm_mask(data)
    if data[:2] == b"P6":
        img = decode_ppm(data)
        return ForegroundMask.from_array(img.pixels.any(axis=2))
    from PIL import Image

    with Image.open(path) as im:
        return ForegroundMask.from_array(np.asarray(im.convert("L")) != 0)


# --- resampling --------------------------------------------------------------


def _nearest_index(n_in: int, n_out: int) -> np.ndarray:
    return (np.arange(n_out, dtype=np.int64) * n_in) // n_out


def resize_nearest(img: ImageBuffer, w: int, h: int) -> ImageBuffer:
    """Nearest-neighbour resize: out(x, y) = in(floor(x*W/w), floor(y*H/h))."""
    if w <= 0 or h <= 0:
        raise ValueError(f"target dimensions must be positive, got {w}x{h}")
    if (w, h) == (img.width, img.height):
        return img
    xs = _nearest_index(img.width, w)
    ys = _nearest_index(img.height, h)
    return ImageBuffer(w, h, img.pixels[ys[:, None], xs[None, :]])


def resize_mask_nearest(mask: ForegroundMask, w: int, h: int) -> ForegroundMask:
    if w <= 0 or h <= 0:
        raise ValueError(f"target dimensions must be positive, got {w}x{h}")
    if (w, h) == (mask.width, mask.height):
        return mask
    xs = _nearest_index(mask.width, w)
    ys = _nearest_index(mask.height, h)
    return ForegroundMask(w, h, mask.bits[ys[:, None], xs[None, :]])
