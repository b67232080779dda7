"""Random signature generators shared by property tests."""

import numpy as np

from dcreid.descriptor import CentroidDcd, DcdSet
from dcreid.regions import DominantColorRegion, Part
from dcreid.signature import ExtractionParams, PersonSignature

PARAMS = ExtractionParams()
FP = PARAMS.fingerprint()


def random_dcds(rng, max_colors=8, palette=72, allow_empty=False):
    k = int(rng.integers(0 if allow_empty else 1, min(max_colors, palette) + 1))
    if k == 0:
        return DcdSet()
    colors = rng.choice(palette, size=k, replace=False)
    ps = rng.dirichlet(np.ones(k))
    order = sorted(zip(colors.tolist(), ps.tolist()), key=lambda cp: (-cp[1], cp[0]))
    return DcdSet(tuple(CentroidDcd(c, p) for c, p in order), max_colors)


def random_regions(rng, dcds, part, rows, width=48, max_regions=6):
    regions = []
    for c in sorted(dcds.colors):
        for _ in range(int(rng.integers(0, max_regions // 2 + 1))):
            y = int(rng.integers(rows.start, rows.stop))
            h = int(rng.integers(1, rows.stop - y + 1))
            x = int(rng.integers(0, width))
            w = int(rng.integers(1, width - x + 1))
            area = int(rng.integers(1, w * h + 1))
            regions.append(DominantColorRegion(c, part, area, x, y, w, h, 128))
    return regions


def random_signature(rng, ident="x", palette=72, allow_empty=False, fingerprint=FP):
    upper = random_dcds(rng, palette=palette, allow_empty=allow_empty)
    lower = random_dcds(rng, palette=palette, allow_empty=allow_empty)
    regions = random_regions(rng, upper, Part.UPPER, range(0, 64))
    regions += random_regions(rng, lower, Part.LOWER, range(64, 128))
    return PersonSignature(ident, (48, 128), upper, lower, tuple(regions), fingerprint)
