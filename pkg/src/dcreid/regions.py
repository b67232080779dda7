"""Dominant color regions: per-color connected components with MBR statistics."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import ndimage

from .colorquant import N_COLORS, QuantizedImage
from .descriptor import DcdSet, select_cells

DEFAULT_CONNECTIVITY = 8
DEFAULT_MIN_AREA = 5

_STRUCTURES = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


class Part(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class DominantColorRegion:
    """One connected component of a centroid dominant color.

    ``x, y, width, height`` is the minimum bounding rectangle in full-image
    pixel coordinates; ``center_y`` and ``mbr_height`` are normalized by
    ``image_height``.
    """

    color: int
    part: Part
    area: int
    x: int
    y: int
    width: int
    height: int
    image_height: int
    center_y: float = field(init=False)
    mbr_height: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.color < N_COLORS:
            raise ValueError(f"color out of range: {self.color}")
        if self.area < 1 or self.width < 1 or self.height < 1:
            raise ValueError("region must cover at least one pixel")
        if self.area > self.width * self.height:
            raise ValueError("area exceeds bounding rectangle")
        if self.image_height <= 0 or self.y < 0 or self.y + self.height > self.image_height:
            raise ValueError("bounding rectangle outside image rows")
        object.__setattr__(self, "part", Part(self.part))
        object.__setattr__(self, "center_y", (self.y + self.height / 2) / self.image_height)
        object.__setattr__(self, "mbr_height", self.height / self.image_height)

    @property
    def mbr(self) -> tuple[int, int, int, int]:
        return self.x, self.y, self.width, self.height

    def translated(self, dx: int) -> DominantColorRegion:
        return replace(self, x=self.x + dx)


def color_mask(qimg: QuantizedImage, c: int, selector=None) -> np.ndarray:
    if not 0 <= c < N_COLORS:
        raise ValueError(f"color out of range: {c}")
    return select_cells(qimg, selector) & (qimg.cells == c)


def connected_components(mask, connectivity: int = DEFAULT_CONNECTIVITY) -> list[np.ndarray]:
    """Split the true pixels of ``mask`` into maximal connected sets.

    Each component is an (n, 2) int array of ``(x, y)`` pairs in raster
    order; components are ordered by the raster position of their first pixel.
    """
    if connectivity not in _STRUCTURES:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    mask = np.asarray(mask, dtype=bool)
    labels, n = ndimage.label(mask, structure=_STRUCTURES[connectivity])
    if n == 0:
        return []
    flat = labels.ravel()
    idx = np.flatnonzero(flat)
    lab = flat[idx]
    # stable sort by label keeps raster order inside each component
    order = np.argsort(lab, kind="stable")
    idx, lab = idx[order], lab[order]
    starts = np.flatnonzero(np.r_[True, lab[1:] != lab[:-1]])
    groups = np.split(idx, starts[1:])
    groups.sort(key=lambda g: g[0])
    width = mask.shape[1]
    return [np.column_stack((g % width, g // width)) for g in groups]


def filter_noise(components, min_area: int = DEFAULT_MIN_AREA) -> list:
    if min_area < 1:
        raise ValueError(f"min_area must be >= 1, got {min_area}")
    return [c for c in components if len(c) >= min_area]


def region_stats(component, color: int, part: Part, image_height: int) -> DominantColorRegion:
    pts = np.asarray(component).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("cannot describe an empty component")
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    return DominantColorRegion(
        color=int(color),
        part=Part(part),
        area=len(pts),
        x=int(x0),
        y=int(y0),
        width=int(x1 - x0 + 1),
        height=int(y1 - y0 + 1),
        image_height=int(image_height),
    )


def extract_dcrs(
    qimg: QuantizedImage,
    dcds: DcdSet,
    part: Part,
    selector=None,
    connectivity: int = DEFAULT_CONNECTIVITY,
    min_area: int = DEFAULT_MIN_AREA,
) -> tuple[DominantColorRegion, ...]:
    """Regions of one body part, ordered by color then by first raster pixel."""
    regions = []
    for c in sorted(dcds.colors):
        comps = connected_components(color_mask(qimg, c, selector), connectivity)
        for comp in filter_noise(comps, min_area):
            regions.append(region_stats(comp, c, part, qimg.height))
    return tuple(regions)
