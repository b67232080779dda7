"""Normalized 72-bin color histograms and top-M centroid dominant colors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .colorquant import MASKED, N_COLORS, QuantizedImage

DEFAULT_MAX_COLORS = 8


def select_cells(qimg: QuantizedImage, selector=None) -> np.ndarray:
    """Boolean (H, W) array of selected, non-masked cells.

    ``selector`` may be None (whole image), a boolean (H, W) array, or a
    ``range``/``slice`` of rows.
    """
    keep = qimg.cells != MASKED
    if selector is None:
        return keep
    if isinstance(selector, (range, slice)):
        rows = np.zeros(qimg.height, dtype=bool)
        if isinstance(selector, range):
            rows[selector.start : selector.stop] = True
        else:
            rows[selector] = True
        return keep & rows[:, None]
    sel = np.asarray(selector, dtype=bool)
    if sel.shape != keep.shape:
        raise ValueError(f"selector shape {sel.shape} does not match image {keep.shape}")
    return keep & sel


@dataclass(frozen=True, eq=False)
class ColorHistogram:
    bins: np.ndarray
    pixel_count: int

    def __eq__(self, other):
        if not isinstance(other, ColorHistogram):
            return NotImplemented
        return self.pixel_count == other.pixel_count and np.array_equal(self.bins, other.bins)


def color_histogram(qimg: QuantizedImage, selector=None) -> ColorHistogram:
    values = qimg.cells[select_cells(qimg, selector)]
    total = int(values.size)
    if total == 0:
        return ColorHistogram(np.zeros(N_COLORS), 0)
    counts = np.bincount(values.astype(np.int64), minlength=N_COLORS)
    return ColorHistogram(counts / total, total)


class CentroidDcd(NamedTuple):
    color: int
    percentage: float


@dataclass(frozen=True)
class DcdSet:
    """Up to ``max_colors`` dominant colors, sorted by descending percentage."""

    entries: tuple[CentroidDcd, ...] = ()
    max_colors: int = DEFAULT_MAX_COLORS

    def __post_init__(self):
        entries = tuple(CentroidDcd(int(c), float(p)) for c, p in self.entries)
        if len(entries) > self.max_colors:
            raise ValueError(f"{len(entries)} entries exceed max_colors={self.max_colors}")
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(e.color for e in self.entries)

    def as_dict(self) -> dict[int, float]:
        return {e.color: e.percentage for e in self.entries}

    def as_vector(self) -> np.ndarray:
        vec = np.zeros(N_COLORS)
        for c, p in self.entries:
            vec[c] = p
        return vec


def renormalize(entries) -> list[CentroidDcd]:
    total = sum(p for _, p in entries)
    if total == 0:
        return []
    return [CentroidDcd(c, p / total) for c, p in entries]


def extract_centroid_dcds(hist: ColorHistogram, max_colors: int = DEFAULT_MAX_COLORS) -> DcdSet:
    """Keep the ``max_colors`` most frequent colors and renormalize them.

    Zero bins are dropped; equal percentages are ordered by ascending color.
    """
    if max_colors < 1:
        raise ValueError(f"max_colors must be >= 1, got {max_colors}")
    ranked = sorted(
        ((c, float(p)) for c, p in enumerate(hist.bins) if p > 0),
        key=lambda cp: (-cp[1], cp[0]),
    )
    return DcdSet(tuple(renormalize(ranked[:max_colors])), max_colors)
