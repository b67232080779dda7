"""Gallery ranking and Cumulative Matching Characteristic (CMC) evaluation."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import EvaluationError
from .matching import GalleryIndex, MatchParams
from .signature import PersonSignature


@dataclass(frozen=True)
class RankedList:
    probe_id: str
    entries: tuple[tuple[str, float], ...]  # (gallery id, combined score), best first

    def rank_of(self, gallery_id: str) -> int:
        for pos, (gid, _) in enumerate(self.entries, start=1):
            if gid == gallery_id:
                return pos
        raise KeyError(gallery_id)


@dataclass(frozen=True)
class CmcCurve:
    points: tuple[tuple[int, float], ...]  # (k, fraction of probes with rank <= k)

    def at(self, k: int) -> float:
        """CMC value at rank ``k`` (clamped to the gallery size)."""
        if k < 1:
            raise ValueError("rank must be >= 1")
        return self.points[min(k, len(self.points)) - 1][1]

    @property
    def fractions(self) -> list[float]:
        return [f for _, f in self.points]


@dataclass(frozen=True)
class ProbeRank:
    probe_id: str
    gallery_id: str
    rank: int
    score: float


@dataclass(frozen=True)
class EvaluationResult:
    cmc: CmcCurve
    ranks: tuple[ProbeRank, ...]


def _order(ids: Sequence[str], scores: Sequence[float]) -> tuple[tuple[str, float], ...]:
    # descending score, ties by ascending gallery id
    return tuple(sorted(zip(ids, scores), key=lambda e: (-e[1], e[0])))


def rank_gallery(
    probe: PersonSignature,
    gallery: Sequence[PersonSignature] | GalleryIndex,
    params: MatchParams | None = None,
) -> RankedList:
    index = gallery if isinstance(gallery, GalleryIndex) else GalleryIndex(gallery)
    scores = [s.combined for s in index.score(probe, params)]
    return RankedList(probe.id, _order(index.ids, scores))


def compute_cmc(ranked: Sequence[RankedList], truth: Mapping[str, str]) -> CmcCurve:
    ranks = _true_ranks(ranked, truth)
    return cmc_from_ranks([r for r, _ in ranks], _gallery_size(ranked))


def _gallery_size(ranked: Sequence[RankedList]) -> int:
    if not ranked:
        raise EvaluationError("no probes to evaluate")
    sizes = {len(r.entries) for r in ranked}
    if len(sizes) != 1:
        raise EvaluationError(f"ranked lists have differing gallery sizes: {sorted(sizes)}")
    return sizes.pop()


def _true_ranks(ranked: Sequence[RankedList], truth: Mapping[str, str]) -> list[tuple[int, float]]:
    out = []
    for rl in ranked:
        if rl.probe_id not in truth:
            raise EvaluationError(f"probe {rl.probe_id!r} has no ground-truth entry")
        target = truth[rl.probe_id]
        for pos, (gid, score) in enumerate(rl.entries, start=1):
            if gid == target:
                out.append((pos, score))
                break
        else:
            raise EvaluationError(
                f"true match {target!r} of probe {rl.probe_id!r} is not in its ranked gallery"
            )
    return out


def cmc_from_ranks(ranks: Sequence[int], gallery_size: int) -> CmcCurve:
    """CMC curve from 1-based ranks of the true matches."""
    if not ranks:
        raise EvaluationError("no probes to evaluate")
    if gallery_size < 1:
        raise EvaluationError("gallery is empty")
    hist = [0] * (gallery_size + 1)
    for r in ranks:
        if not 1 <= r <= gallery_size:
            raise EvaluationError(f"rank {r} outside [1, {gallery_size}]")
        hist[r] += 1
    n = len(ranks)
    points = []
    hits = 0
    for k in range(1, gallery_size + 1):
        hits += hist[k]
        points.append((k, hits / n))
    return CmcCurve(tuple(points))


# --- dataset-level evaluation -----------------------------------------------

_worker_index: GalleryIndex | None = None
_worker_params: MatchParams | None = None


def _init_worker(index, params):
    global _worker_index, _worker_params
    _worker_index, _worker_params = index, params


def _rank_in_worker(probe):
    return rank_gallery(probe, _worker_index, _worker_params)


def rank_all(
    probes: Sequence[PersonSignature],
    gallery: Sequence[PersonSignature],
    params: MatchParams | None = None,
    jobs: int = 1,
) -> list[RankedList]:
    index = GalleryIndex(gallery)
    params = params or MatchParams()
    if jobs <= 1 or len(probes) < 2:
        return [rank_gallery(p, index, params) for p in probes]
    with ProcessPoolExecutor(
        max_workers=jobs, initializer=_init_worker, initargs=(index, params)
    ) as pool:
        # map() yields in input order regardless of completion order
        return list(pool.map(_rank_in_worker, probes, chunksize=max(1, len(probes) // (4 * jobs))))


def evaluate_dataset(
    probes: Sequence[PersonSignature],
    gallery: Sequence[PersonSignature],
    truth: Mapping[str, str] | None = None,
    params: MatchParams | None = None,
    jobs: int = 1,
) -> EvaluationResult:
    """Rank the gallery for every probe and summarize as a CMC curve.

    ``truth`` maps probe id to the id of its gallery counterpart; when
    omitted each probe is expected to match the gallery entry with its own id.
    """
    if not gallery:
        raise EvaluationError("gallery is empty")
    if truth is None:
        truth = {p.id: p.id for p in probes}
    ranked = rank_all(probes, gallery, params, jobs)
    true_ranks = _true_ranks(ranked, truth)
    cmc = cmc_from_ranks([r for r, _ in true_ranks], len(gallery))
    rows = tuple(
        ProbeRank(rl.probe_id, truth[rl.probe_id], rank, score)
        for rl, (rank, score) in zip(ranked, true_ranks)
    )
    return EvaluationResult(cmc, rows)


def write_cmc_csv(path, cmc: CmcCurve) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "cmc"])
        for k, f in cmc.points:
            w.writerow([k, f"{f:.6f}"])


def write_ranks_csv(path, ranks: Sequence[ProbeRank]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["probe_id", "gallery_id", "rank", "score"])
        for r in ranks:
            w.writerow([r.probe_id, r.gallery_id, r.rank, f"{r.score:.6f}"])
