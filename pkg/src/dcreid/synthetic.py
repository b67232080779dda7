"""Synthetic two-block pedestrians for end-to-end checks.

Each identity wears an upper and a lower garment whose colors sit at the
centre of a hue/saturation bin.  Rendering jitters the value channel
per pixel inside its V bin (optionally pushing a fraction of pixels into
the neighbouring V bin) and slides the body band horizontally.
"""

from __future__ import annotations

import colorsys
import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .colorquant import pack_bins
from .imaging import ImageBuffer, write_image

WIDTH = 48
HEIGHT = 128
BAND_WIDTH = 20
BAND_X = 14
MAX_SHIFT = WIDTH // 4
BACKGROUND = (128, 128, 128)

HUE_CENTERS = (348.0, 30.0, 57.5, 115.0, 172.5, 230.0, 282.5, 305.5)
SAT_CENTERS = {1: 0.45, 2: 0.85}
# value draws stay well inside (0.2, 0.7] and (0.7, 1]
VAL_RANGES = {1: (0.30, 0.60), 2: (0.80, 0.98)}


@dataclass(frozen=True)
class Garment:
    hue_bin: int
    sat_bin: int
    val_bin: int

    @property
    def color(self) -> int:
        return pack_bins(self.hue_bin, self.sat_bin, self.val_bin)

    def unit_rgb(self) -> np.ndarray:
        """RGB at v = 1; RGB scales linearly with v for fixed hue and saturation."""
        h = HUE_CENTERS[self.hue_bin] / 360.0
        return np.array(colorsys.hsv_to_rgb(h, SAT_CENTERS[self.sat_bin], 1.0))


@dataclass(frozen=True)
class Identity:
    id: str
    upper: Garment
    lower: Garment


def make_identities(n: int, seed: int = 0) -> list[Identity]:
    """``n`` identities with pairwise distinct (upper, lower) garment colors."""
    garments = [
        Garment(h, s, v) for h, s, v in itertools.product(range(8), (1, 2), (1, 2))
    ]
    pairs = [(u, l) for u, l in itertools.permutations(garments, 2)]
    if n > len(pairs):
        raise ValueError(f"at most {len(pairs)} distinct identities available")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(pairs), size=n, replace=False)
    return [
        Identity(f"{i + 1:03d}", *pairs[k]) for i, k in enumerate(sorted(chosen.tolist()))
    ]


def _garment_pixels(g: Garment, shape, rng, cross_fraction: float) -> np.ndarray:
    vbin = np.full(shape, g.val_bin)
    if cross_fraction > 0:
        flip = rng.random(shape) < cross_fraction
        vbin = np.where(flip, 3 - g.val_bin, vbin)
    lo = np.where(vbin == 1, VAL_RANGES[1][0], VAL_RANGES[2][0])
    hi = np.where(vbin == 1, VAL_RANGES[1][1], VAL_RANGES[2][1])
    v = lo + (hi - lo) * rng.random(shape)
    rgb = v[..., None] * g.unit_rgb() * 255.0
    return np.clip(np.rint(rgb), 0, 255).astype(np.uint8)


def render(
    identity: Identity,
    rng: np.random.Generator,
    shift: int | None = None,
    cross_fraction: float = 0.0,
) -> ImageBuffer:
    """One camera view: grey background, body band split at half height."""
    if shift is None:
        shift = int(rng.integers(-MAX_SHIFT, MAX_SHIFT + 1))
    x0 = BAND_X + shift
    if x0 < 1 or x0 + BAND_WIDTH > WIDTH - 1:
        raise ValueError(f"shift {shift} pushes the body band onto the image border")
    img = np.empty((HEIGHT, WIDTH, 3), dtype=np.uint8)
    img[:] = BACKGROUND
    half = HEIGHT // 2
    img[:half, x0 : x0 + BAND_WIDTH] = _garment_pixels(
        identity.upper, (half, BAND_WIDTH), rng, cross_fraction
    )
    img[half:, x0 : x0 + BAND_WIDTH] = _garment_pixels(
        identity.lower, (HEIGHT - half, BAND_WIDTH), rng, cross_fraction
    )
    return ImageBuffer.from_array(img)


def make_pairs(n: int, seed: int = 0, cross_fraction: float = 0.0):
    """Return identities plus their camera-1 and camera-2 renderings."""
    identities = make_identities(n, seed)
    rng = np.random.default_rng(seed + 1)
    cam1 = [render(i, rng, cross_fraction=cross_fraction) for i in identities]
    cam2 = [render(i, rng, cross_fraction=cross_fraction) for i in identities]
    return identities, cam1, cam2


def write_dataset(root, n: int, seed: int = 0, cross_fraction: float = 0.0) -> list[Identity]:
    """Write a VIPeR-style ``cam_a/``, ``cam_b/`` tree of PPM files."""
    root = Path(root)
    identities, cam1, cam2 = make_pairs(n, seed, cross_fraction)
    for sub, images, angle in (("cam_a", cam1, 0), ("cam_b", cam2, 90)):
        (root / sub).mkdir(parents=True, exist_ok=True)
        for ident, img in zip(identities, images):
            write_image(root / sub / f"{ident.id}_{angle}.ppm", img)
    return identities
