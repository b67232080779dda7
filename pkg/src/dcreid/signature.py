"""Per-pedestrian appearance signature: upper/lower dominant colors and regions."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

from .colorquant import quantize_image
from .descriptor import DEFAULT_MAX_COLORS, DcdSet, color_histogram, extract_centroid_dcds
from .imaging import ForegroundMask, ImageBuffer, resize_mask_nearest, resize_nearest
from .regions import (
    DEFAULT_CONNECTIVITY,
    DEFAULT_MIN_AREA,
    DominantColorRegion,
    Part,
    extract_dcrs,
)

DEFAULT_WIDTH = 48
DEFAULT_HEIGHT = 128
DEFAULT_TAU = 0.5

# bump when extraction semantics change, so old signatures stop comparing equal
_ALGORITHM_TAG = "dcreid-extract-1"


@dataclass(frozen=True)
class ExtractionParams:
    norm_width: int = DEFAULT_WIDTH
    norm_height: int = DEFAULT_HEIGHT
    tau: float = DEFAULT_TAU
    max_colors: int = DEFAULT_MAX_COLORS
    connectivity: int = DEFAULT_CONNECTIVITY
    min_area: int = DEFAULT_MIN_AREA

    def __post_init__(self):
        if self.norm_width <= 0 or self.norm_height <= 0:
            raise ValueError("normalization size must be positive")
        if not 0 < self.tau < 1:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")
        if self.max_colors < 1:
            raise ValueError("max_colors must be >= 1")
        if self.connectivity not in (4, 8):
            raise ValueError("connectivity must be 4 or 8")
        if self.min_area < 1:
            raise ValueError("min_area must be >= 1")
        # fail early on a split that leaves a part empty
        split_body(self.norm_height, self.tau)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> ExtractionParams:
        return cls(
            norm_width=int(data["norm_width"]),
            norm_height=int(data["norm_height"]),
            tau=float(data["tau"]),
            max_colors=int(data["max_colors"]),
            connectivity=int(data["connectivity"]),
            min_area=int(data["min_area"]),
        )

    def fingerprint(self) -> str:
        payload = json.dumps({"algorithm": _ALGORITHM_TAG, **self.to_dict()}, sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class PersonSignature:
    id: str
    image_size: tuple[int, int]
    upper_dcds: DcdSet
    lower_dcds: DcdSet
    regions: tuple[DominantColorRegion, ...]
    params_fingerprint: str

    def dcds(self, part: Part) -> DcdSet:
        return self.upper_dcds if Part(part) is Part.UPPER else self.lower_dcds

    def part_regions(self, part: Part) -> tuple[DominantColorRegion, ...]:
        return tuple(r for r in self.regions if r.part is Part(part))


def split_body(image_height: int, tau: float = DEFAULT_TAU) -> tuple[range, range]:
    """Row ranges of the upper and lower body, split at ``floor(tau * H)``."""
    if not 0 < tau < 1:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    cut = int(tau * image_height)
    if cut <= 0 or cut >= image_height:
        raise ValueError(f"split of {image_height} rows at tau={tau} leaves an empty part")
    return range(0, cut), range(cut, image_height)


def build_signature(
    img: ImageBuffer,
    mask: ForegroundMask | None = None,
    id: str = "",
    params: ExtractionParams | None = None,
) -> PersonSignature:
    params = params or ExtractionParams()
    if mask is not None and (mask.width, mask.height) != (img.width, img.height):
        raise ValueError(
            f"mask is {mask.width}x{mask.height} but image is {img.width}x{img.height}"
        )
    w, h = params.norm_width, params.norm_height
    img = resize_nearest(img, w, h)
    if mask is not None:
        mask = resize_mask_nearest(mask, w, h)
    qimg = quantize_image(img, mask)

    upper_rows, lower_rows = split_body(h, params.tau)
    dcds = {}
    regions: list[DominantColorRegion] = []
    for part, rows in ((Part.UPPER, upper_rows), (Part.LOWER, lower_rows)):
        hist = color_histogram(qimg, rows)
        dcds[part] = extract_centroid_dcds(hist, params.max_colors)
        regions.extend(
            extract_dcrs(qimg, dcds[part], part, rows, params.connectivity, params.min_area)
        )
    return PersonSignature(
        id=str(id),
        image_size=(w, h),
        upper_dcds=dcds[Part.UPPER],
        lower_dcds=dcds[Part.LOWER],
        regions=tuple(regions),
        params_fingerprint=params.fingerprint(),
    )
