"""Dataset manifests, VIPeR-style directory scanning and signature files.

Signature files are JSON documents::

    {
      "version": 1,
      "params": {"norm_width": 48, ..., "fingerprint": "..."},
      "signatures": [
        {"id": "001", "image_size": [48, 128], "params_fingerprint": "...",
         "upper_dcds": [[color, pct], ...], "lower_dcds": [...],
         "regions": [[color, part, area, x, y, w, h], ...]}
      ]
    }

Percentages are written with Python's shortest round-trip float repr, so a
write/read cycle is lossless.  Normalized region centers and heights are
recomputed on load from the bounding rectangle and ``image_size``.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .descriptor import CentroidDcd, DcdSet
from .errors import IngestionError, SignatureFormatError
from .regions import DominantColorRegion, Part
from .signature import ExtractionParams, PersonSignature

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
CAMERAS = ("A", "B")
IMAGE_EXTENSIONS = {".ppm", ".pnm", ".bmp", ".png", ".jpg", ".jpeg", ".tif", ".tiff"}
DEFAULT_ID_PATTERN = r"^(\d+)"

MANIFEST_HEADER = ["id", "camera", "image_path", "mask_path"]


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    camera: str
    image_path: str
    mask_path: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...] = ()

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.camera not in CAMERAS:
                raise IngestionError(f"unknown camera tag {e.camera!r} for id {e.id!r}")
            key = (e.id, e.camera)
            if key in seen:
                raise IngestionError(f"duplicate entry for id {e.id!r} camera {e.camera}")
            seen.add(key)

    def __len__(self):
        return len(self.entries)

    def camera(self, tag: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.camera == tag]


# --- VIPeR layout ------------------------------------------------------------


def _list_images(directory: Path) -> list[Path]:
    return sorted(
        p
        for p in directory.iterdir()
        if p.is_file() and not p.name.startswith(".") and p.suffix.lower() in IMAGE_EXTENSIONS
    )


def scan_viper_layout(root, id_pattern: str = DEFAULT_ID_PATTERN) -> DatasetManifest:
    """Pair images across ``cam_a/`` and ``cam_b/`` by their leading identity token.

    Identities present under only one camera are logged and skipped.
    """
    root = Path(root)
    dirs = {"A": root / "cam_a", "B": root / "cam_b"}
    missing = [str(d) for d in dirs.values() if not d.is_dir()]
    if missing:
        raise IngestionError(f"missing camera directories: {', '.join(missing)}")

    pattern = re.compile(id_pattern)
    found: dict[str, dict[str, Path]] = {"A": {}, "B": {}}
    bad = []
    for cam, directory in dirs.items():
        for path in _list_images(directory):
            m = pattern.match(path.name)
            if not m:
                bad.append(str(path))
                continue
            ident = m.group(1) if m.groups() else m.group(0)
            if ident in found[cam]:
                bad.append(f"{path} (duplicate identity {ident} in cam_{cam.lower()})")
                continue
            found[cam][ident] = path
    if bad:
        raise IngestionError("unparseable image filenames:\n  " + "\n  ".join(bad))

    unpaired = sorted(found["A"].keys() ^ found["B"].keys())
    for ident in unpaired:
        cam = "A" if ident in found["A"] else "B"
        log.warning("identity %s only present in camera %s; excluded", ident, cam)

    entries = []
    for ident in sorted(found["A"].keys() & found["B"].keys()):
        for cam in CAMERAS:
            entries.append(ManifestEntry(ident, cam, str(found[cam][ident])))
    return DatasetManifest(tuple(entries))


# --- manifest CSV ------------------------------------------------------------


def write_manifest(path, manifest: DatasetManifest) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MANIFEST_HEADER)
        for e in manifest.entries:
            w.writerow([e.id, e.camera, e.image_path, e.mask_path or ""])


def load_manifest(path) -> DatasetManifest:
    """Read a manifest CSV; relative image paths resolve against its directory."""
    base = Path(path).parent
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != MANIFEST_HEADER:
            raise IngestionError(
                f"{path}: expected header {','.join(MANIFEST_HEADER)}, got {reader.fieldnames}"
            )
        entries = []
        for lineno, row in enumerate(reader, start=2):
            ident = (row.get("id") or "").strip()
            image = (row.get("image_path") or "").strip()
            if not ident or not image:
                raise IngestionError(f"{path}:{lineno}: id and image_path are required")
            mask = (row.get("mask_path") or "").strip() or None
            entries.append(
                ManifestEntry(
                    ident,
                    (row.get("camera") or "").strip().upper(),
                    _resolve(base, image),
                    _resolve(base, mask) if mask else None,
                )
            )
    return DatasetManifest(tuple(entries))


def _resolve(base: Path, p: str) -> str:
    return p if os.path.isabs(p) else str(base / p)


def load_truth(path) -> dict[str, str]:
    """Ground truth CSV with header ``probe_id,gallery_id``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or {"probe_id", "gallery_id"} - set(reader.fieldnames):
            raise IngestionError(f"{path}: expected header probe_id,gallery_id")
        truth = {}
        for row in reader:
            pid = row["probe_id"].strip()
            if pid in truth:
                raise IngestionError(f"{path}: duplicate probe id {pid!r}")
            truth[pid] = row["gallery_id"].strip()
    return truth


# --- signature files ---------------------------------------------------------


def signature_to_dict(sig: PersonSignature) -> dict:
    return {
        "id": sig.id,
        "image_size": list(sig.image_size),
        "params_fingerprint": sig.params_fingerprint,
        "upper_dcds": [[c, p] for c, p in sig.upper_dcds],
        "lower_dcds": [[c, p] for c, p in sig.lower_dcds],
        "regions": [
            [r.color, r.part.value, r.area, r.x, r.y, r.width, r.height] for r in sig.regions
        ],
    }


def _dcds_from(raw, max_colors: int) -> DcdSet:
    return DcdSet(tuple(CentroidDcd(int(c), float(p)) for c, p in raw), max_colors)


def signature_from_dict(data: dict, max_colors: int) -> PersonSignature:
    try:
        width, height = (int(v) for v in data["image_size"])
        regions = tuple(
            DominantColorRegion(
                color=int(c),
                part=Part(part),
                area=int(area),
                x=int(x),
                y=int(y),
                width=int(w),
                height=int(h),
                image_height=height,
            )
            for c, part, area, x, y, w, h in data["regions"]
        )
        return PersonSignature(
            id=str(data["id"]),
            image_size=(width, height),
            upper_dcds=_dcds_from(data["upper_dcds"], max_colors),
            lower_dcds=_dcds_from(data["lower_dcds"], max_colors),
            regions=regions,
            params_fingerprint=str(data["params_fingerprint"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SignatureFormatError(f"malformed signature record {data.get('id')!r}: {exc}") from exc


def dumps_signatures(params: ExtractionParams, signatures: Sequence[PersonSignature]) -> str:
    fp = params.fingerprint()
    for sig in signatures:
        if sig.params_fingerprint != fp:
            raise SignatureFormatError(
                f"signature {sig.id!r} has fingerprint {sig.params_fingerprint}, file uses {fp}"
            )
    doc = {
        "version": FORMAT_VERSION,
        "params": {**params.to_dict(), "fingerprint": fp},
        "signatures": [signature_to_dict(s) for s in signatures],
    }
    return json.dumps(doc, indent=1) + "\n"


def loads_signatures(text: str) -> tuple[ExtractionParams, list[PersonSignature]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SignatureFormatError(f"not a signature file: {exc}") from exc
    if not isinstance(doc, dict):
        raise SignatureFormatError("signature file must hold a JSON object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise SignatureFormatError(f"unsupported signature file version {version!r}")
    try:
        params = ExtractionParams.from_dict(doc["params"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SignatureFormatError(f"invalid params block: {exc}") from exc
    fp = params.fingerprint()
    stored = doc["params"].get("fingerprint")
    if stored is not None and stored != fp:
        raise SignatureFormatError(f"params fingerprint {stored} does not match params ({fp})")
    raw = doc.get("signatures")
    if not isinstance(raw, list):
        raise SignatureFormatError("'signatures' must be a list")
    sigs = [signature_from_dict(r, params.max_colors) for r in raw]
    fps = {s.params_fingerprint for s in sigs}
    if fps - {fp}:
        raise SignatureFormatError(
            f"signature file mixes parameter fingerprints: {sorted(fps | {fp})}"
        )
    ids = [s.id for s in sigs]
    if len(set(ids)) != len(ids):
        raise SignatureFormatError("signature file contains duplicate ids")
    return params, sigs


def write_signatures(path, params: ExtractionParams, signatures: Sequence[PersonSignature]) -> None:
    text = dumps_signatures(params, signatures)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_signatures(path) -> tuple[ExtractionParams, list[PersonSignature]]:
    with open(path, encoding="utf-8") as fh:
        return loads_signatures(fh.read())
