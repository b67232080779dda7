"""Probe-vs-gallery similarity from dominant color histograms and region layout.

The fused score is ``alpha * dch + (1 - alpha) * (1 - dcr)``, where ``dch``
is the part-weighted dominant color histogram intersection (a similarity)
and ``dcr`` the normalized spatial dissimilarity of same-colored regions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .colorquant import N_COLORS
from .descriptor import DcdSet
from .errors import IncompatibleSignatureError
from .regions import DominantColorRegion, Part
from .signature import PersonSignature

DEFAULT_ALPHA = 0.4
DEFAULT_BETA = 0.6
DEFAULT_GAMMA = 0.55


@dataclass(frozen=True)
class MatchParams:
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    gamma: float = DEFAULT_GAMMA
    # restrict region pairing to regions of the same body part
    same_part_only: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")


@dataclass(frozen=True)
class MatchScore:
    dch: float
    dcr_dissim: float
    combined: float


def check_compatible(a: PersonSignature, b: PersonSignature) -> None:
    if a.params_fingerprint != b.params_fingerprint:
        raise IncompatibleSignatureError(
            f"signatures {a.id!r} and {b.id!r} were extracted with different parameters "
            f"({a.params_fingerprint} != {b.params_fingerprint})"
        )


def part_hist_similarity(fa: DcdSet, fb: DcdSet) -> float:
    """Histogram intersection of two sparse dominant color sets."""
    a, b = fa.as_dict(), fb.as_dict()
    total = 0.0
    for c in sorted(a.keys() & b.keys()):
        total += min(a[c], b[c])
    return total


def dch_similarity(a: PersonSignature, b: PersonSignature, gamma: float = DEFAULT_GAMMA) -> float:
    check_compatible(a, b)
    upper = part_hist_similarity(a.upper_dcds, b.upper_dcds)
    lower = part_hist_similarity(a.lower_dcds, b.lower_dcds)
    return gamma * upper + (1 - gamma) * lower


def region_dissimilarity(u: DominantColorRegion, w: DominantColorRegion, beta: float = DEFAULT_BETA) -> float:
    # x position and width are deliberately ignored
    return beta * abs(u.center_y - w.center_y) + (1 - beta) * abs(u.mbr_height - w.mbr_height)


def dcr_dissimilarity(
    ra: Sequence[DominantColorRegion],
    rb: Sequence[DominantColorRegion],
    beta: float = DEFAULT_BETA,
    same_part_only: bool = False,
) -> float:
    """Mean over probe regions of the closest same-colored gallery region.

    A probe region with no same-colored partner contributes 1. Directional:
    ``ra`` is the probe side.
    """
    if not ra and not rb:
        return 0.0
    if not ra or not rb:
        return 1.0
    total = 0.0
    for u in ra:
        best = 1.0
        found = False
        for w in rb:
            if w.color != u.color or (same_part_only and w.part is not u.part):
                continue
            d = region_dissimilarity(u, w, beta)
            if not found or d < best:
                best = d
                found = True
        total += best
    return total / len(ra)


def combined_score(a: PersonSignature, b: PersonSignature, params: MatchParams | None = None) -> MatchScore:
    params = params or MatchParams()
    dch = dch_similarity(a, b, params.gamma)
    dcr = dcr_dissimilarity(a.regions, b.regions, params.beta, params.same_part_only)
    combined = params.alpha * dch + (1 - params.alpha) * (1 - dcr)
    return MatchScore(dch, dcr, combined)


class GalleryIndex:
    """Columnar view of a gallery for scoring one probe against every entry.

    Produces exactly the same floating-point values as ``combined_score``:
    the accumulation order over colors and probe regions is kept identical.
    """

    def __init__(self, gallery: Sequence[PersonSignature]):
        gallery = list(gallery)
        if not gallery:
            raise ValueError("gallery is empty")
        self.fingerprint = gallery[0].params_fingerprint
        for sig in gallery[1:]:
            check_compatible(gallery[0], sig)
        self.signatures = gallery
        self.ids = [s.id for s in gallery]
        self.upper = np.stack([s.upper_dcds.as_vector() for s in gallery])
        self.lower = np.stack([s.lower_dcds.as_vector() for s in gallery])
        owner, color, part, cy, mh = [], [], [], [], []
        for i, sig in enumerate(gallery):
            for r in sig.regions:
                owner.append(i)
                color.append(r.color)
                part.append(r.part is Part.UPPER)
                cy.append(r.center_y)
                mh.append(r.mbr_height)
        self.n_regions = np.bincount(np.asarray(owner, dtype=np.int64), minlength=len(gallery))
        self.r_owner = np.asarray(owner, dtype=np.int64)
        self.r_color = np.asarray(color, dtype=np.int64)
        self.r_upper = np.asarray(part, dtype=bool)
        self.r_cy = np.asarray(cy, dtype=float)
        self.r_mh = np.asarray(mh, dtype=float)
        self._by_color = {c: np.flatnonzero(self.r_color == c) for c in np.unique(self.r_color)}

    def __len__(self):
        return len(self.signatures)

    def _dch(self, probe: PersonSignature, gamma: float) -> np.ndarray:
        parts = []
        for dcds, table in ((probe.upper_dcds, self.upper), (probe.lower_dcds, self.lower)):
            acc = np.zeros(len(self))
            for c, p in sorted(dcds.as_dict().items()):
                acc += np.minimum(table[:, c], p)
            parts.append(acc)
        return gamma * parts[0] + (1 - gamma) * parts[1]

    def _dcr(self, probe: PersonSignature, beta: float, same_part_only: bool) -> np.ndarray:
        n = len(self)
        ra = probe.regions
        if not ra:
            return np.where(self.n_regions == 0, 0.0, 1.0)
        total = np.zeros(n)
        for u in ra:
            best = np.full(n, np.inf)
            idx = self._by_color.get(u.color)
            if idx is not None:
                if same_part_only:
                    idx = idx[self.r_upper[idx] == (u.part is Part.UPPER)]
                d = beta * np.abs(u.center_y - self.r_cy[idx]) + (1 - beta) * np.abs(
                    u.mbr_height - self.r_mh[idx]
                )
                np.minimum.at(best, self.r_owner[idx], d)
            total += np.where(np.isinf(best), 1.0, best)
        dcr = total / len(ra)
        return np.where(self.n_regions == 0, 1.0, dcr)

    def score(self, probe: PersonSignature, params: MatchParams | None = None) -> list[MatchScore]:
        params = params or MatchParams()
        if probe.params_fingerprint != self.fingerprint:
            check_compatible(probe, self.signatures[0])
        dch = self._dch(probe, params.gamma)
        dcr = self._dcr(probe, params.beta, params.same_part_only)
        combined = params.alpha * dch + (1 - params.alpha) * (1 - dcr)
        return [MatchScore(float(a), float(b), float(c)) for a, b, c in zip(dch, dcr, combined)]
