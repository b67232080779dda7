"""Command-line front end: ``dcreid {extract,match,evaluate,scan,synth}``.

Exit status: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import dataset_io, evaluation, synthetic
from .errors import ReidError
from .imaging import read_image, read_mask
from .matching import DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_GAMMA, MatchParams, combined_score
from .signature import ExtractionParams, build_signature

log = logging.getLogger("dcreid")

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


def _extraction_args(p: argparse.ArgumentParser) -> None:
    d = ExtractionParams()
    g = p.add_argument_group("extraction parameters")
    g.add_argument("--width", type=int, default=d.norm_width, help="normalized width (default %(default)s)")
    g.add_argument("--height", type=int, default=d.norm_height, help="normalized height (default %(default)s)")
    g.add_argument("--tau", type=float, default=d.tau, help="upper/lower split fraction (default %(default)s)")
    g.add_argument("--max-colors", type=int, default=d.max_colors, help="dominant colors per part (default %(default)s)")
    g.add_argument("--connectivity", type=int, choices=(4, 8), default=d.connectivity)
    g.add_argument("--min-area", type=int, default=d.min_area, help="smallest kept region, pixels (default %(default)s)")


def _match_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("matching parameters")
    g.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="histogram vs region weight (default %(default)s)")
    g.add_argument("--beta", type=float, default=DEFAULT_BETA, help="center vs height weight (default %(default)s)")
    g.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="upper vs lower weight (default %(default)s)")
    g.add_argument("--same-part", action="store_true", help="pair regions only within the same body part")


def _jobs_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcreid", description="Dominant-color person re-identification")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="build signatures for the images of a manifest")
    p.add_argument("manifest", help="CSV with header id,camera,image_path,mask_path")
    p.add_argument("output", help="signature file to write")
    p.add_argument("--camera", choices=dataset_io.CAMERAS, help="only extract this camera's entries")
    _extraction_args(p)
    _jobs_arg(p)

    p = sub.add_parser("match", help="score one probe signature against one gallery signature")
    p.add_argument("signatures", help="signature file holding the probe")
    p.add_argument("probe_id")
    p.add_argument("gallery_id")
    p.add_argument("--gallery-file", help="signature file holding the gallery id (default: same file)")
    _match_args(p)

    p = sub.add_parser("evaluate", help="rank a gallery for every probe and write CMC/rank CSVs")
    p.add_argument("probes", help="probe signature file")
    p.add_argument("gallery", help="gallery signature file")
    p.add_argument("--truth", help="CSV probe_id,gallery_id (default: ids match)")
    p.add_argument("--cmc-out", default="cmc.csv")
    p.add_argument("--ranks-out", default="ranks.csv")
    _match_args(p)
    _jobs_arg(p)

    p = sub.add_parser("scan", help="write a manifest for a cam_a/ cam_b/ dataset directory")
    p.add_argument("root")
    p.add_argument("output")
    p.add_argument("--id-pattern", default=dataset_io.DEFAULT_ID_PATTERN,
                   help="regex whose first group is the identity (default %(default)r)")

    p = sub.add_parser("synth", help="write a synthetic two-camera dataset of PPM images")
    p.add_argument("root")
    p.add_argument("--identities", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cross-fraction", type=float, default=0.0,
                   help="fraction of garment pixels pushed into the adjacent value bin")
    return parser


def _match_params(args, parser) -> MatchParams:
    try:
        return MatchParams(args.alpha, args.beta, args.gamma, args.same_part)
    except ValueError as exc:
        parser.error(str(exc))


def _extraction_params(args, parser) -> ExtractionParams:
    try:
        return ExtractionParams(
            norm_width=args.width,
            norm_height=args.height,
            tau=args.tau,
            max_colors=args.max_colors,
            connectivity=args.connectivity,
            min_area=args.min_area,
        )
    except ValueError as exc:
        parser.error(str(exc))


def _extract_one(task):
    entry, params = task
    try:
        img = read_image(entry.image_path)
        mask = read_mask(entry.mask_path) if entry.mask_path else None
        return build_signature(img, mask, entry.id, params), None
    except (OSError, ReidError, ValueError) as exc:
        return None, f"{entry.image_path}: {exc}"


def cmd_extract(args, parser) -> int:
    params = _extraction_params(args, parser)
    manifest = dataset_io.load_manifest(args.manifest)
    entries = manifest.camera(args.camera) if args.camera else list(manifest.entries)
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise ReidError("manifest has the same id under both cameras; pass --camera A or --camera B")
    tasks = [(e, params) for e in entries]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_extract_one, tasks, chunksize=max(1, len(tasks) // (4 * args.jobs))))
    else:
        results = [_extract_one(t) for t in tasks]

    sigs, failures = [], []
    for sig, err in results:
        if err is None:
            sigs.append(sig)
        else:
            failures.append(err)
    dataset_io.write_signatures(args.output, params, sigs)
    for msg in failures:
        print(f"error: {msg}", file=sys.stderr)
    print(f"wrote {len(sigs)} signatures to {args.output}" + (f" ({len(failures)} failed)" if failures else ""))
    return EXIT_DOMAIN if failures else EXIT_OK


def _find(sigs, ident, path):
    for s in sigs:
        if s.id == ident:
            return s
    raise ReidError(f"id {ident!r} not found in {path}")


def cmd_match(args, parser) -> int:
    mp = _match_params(args, parser)
    _, sigs = dataset_io.read_signatures(args.signatures)
    probe = _find(sigs, args.probe_id, args.signatures)
    gallery_path = args.gallery_file or args.signatures
    gsigs = sigs if gallery_path == args.signatures else dataset_io.read_signatures(gallery_path)[1]
    gal = _find(gsigs, args.gallery_id, gallery_path)
    score = combined_score(probe, gal, mp)
    print(f"dch {score.dch:.6f}")
    print(f"dcr_dissim {score.dcr_dissim:.6f}")
    print(f"combined {score.combined:.6f}")
    return EXIT_OK


def cmd_evaluate(args, parser) -> int:
    mp = _match_params(args, parser)
    _, probes = dataset_io.read_signatures(args.probes)
    _, gallery = dataset_io.read_signatures(args.gallery)
    truth = dataset_io.load_truth(args.truth) if args.truth else None
    result = evaluation.evaluate_dataset(probes, gallery, truth, mp, jobs=args.jobs)
    evaluation.write_cmc_csv(args.cmc_out, result.cmc)
    evaluation.write_ranks_csv(args.ranks_out, result.ranks)
    summary = "  ".join(f"rank-{k}: {100 * result.cmc.at(k):.2f}%" for k in (1, 5, 10, 20))
    print(f"{len(probes)} probes vs {len(gallery)} gallery  {summary}")
    return EXIT_OK


def cmd_scan(args, parser) -> int:
    manifest = dataset_io.scan_viper_layout(args.root, args.id_pattern)
    dataset_io.write_manifest(args.output, manifest)
    print(f"wrote {len(manifest)} entries to {args.output}")
    return EXIT_OK


def cmd_synth(args, parser) -> int:
    if not 0 <= args.cross_fraction <= 1:
        parser.error("--cross-fraction must lie in [0, 1]")
    ids = synthetic.write_dataset(args.root, args.identities, args.seed, args.cross_fraction)
    print(f"wrote {len(ids)} identities under {args.root}")
    return EXIT_OK


COMMANDS = {
    "extract": cmd_extract,
    "match": cmd_match,
    "evaluate": cmd_evaluate,
    "scan": cmd_scan,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return COMMANDS[args.command](args, parser)
    except (ReidError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
