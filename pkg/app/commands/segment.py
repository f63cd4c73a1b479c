"""
`segment`: top-down segmentation with per-level object lists, and `verify`
for the two-part code it can emit.
"""
import argparse
import logging
from pathlib import Path
from typing import List
import numpy as np
from app.commands.options import add_run_options, finish_run
from app.dependencies import get_run_config, load_grid, prepare_output
from app.exceptions import DimensionMismatchError, ImageInfoError
from app.schemas import ObjectListOut
from app.services.hashing import verify_manifest
from app.services.objects import build_object_lists, describe_run
from app.services.pyramid import build_pyramid, rescale_to
from app.services.segmentation import residual, segment_full
from app.utils.export import read_residual_map, write_gray_map, write_json, write_label_map, write_residual_map
from app.utils.pgm import read_pgm

logger = logging.getLogger(__name__)


def run_segment(args: argparse.Namespace) -> int:
    config = get_run_config(args)
    grid = load_grid(args.input)
    pyramid = build_pyramid(grid, config.top_target)
    segmentations = segment_full(
        pyramid,
        similarity_delta=config.similarity_delta,
        refine_delta=config.refine_delta,
        seed_min_size=config.seed_min_size,
        bin_count=config.bin_count,
        border_fraction=config.fractions[-1],
    )
    lists = build_object_lists(segmentations)
    out = prepare_output(config)
    
    written: List[Path] = []
    for seg, objects in zip(segmentations, lists):
        labels, intensity = seg.labels, seg.intensity_map.values
        if config.rescale:
            labels = rescale_to(labels, pyramid, seg.level)
            intensity = rescale_to(intensity, pyramid, seg.level)
        written.append(write_label_map(labels, out / f"labels_L{seg.level}.pgm"))
        written.append(write_gray_map(intensity, out / f"intensity_L{seg.level}.pgm"))
        written.append(write_json(ObjectListOut.from_object_list(objects), out / f"objects_L{seg.level}.json"))
    
    written.append(write_json(describe_run(pyramid, segmentations, lists), out / "summary.json"))
    
    if args.residual:
        # against the rounded intensity map that was just written
        diff = residual(grid, segmentations[-1], quantized=True)
        written.append(write_residual_map(diff.residual.astype(np.int64), out / "residual_L0.pgm"))
    
    finish_run(config, written)
    return 0


def run_verify(args: argparse.Namespace) -> int:
    """
    Rebuild the original from intensity and residual maps.
    
    Raises:
        DimensionMismatchError: If the three images differ in size
        ImageInfoError: If the reconstruction is not exact, or a file listed
            in the ``--manifest`` directory no longer matches its digest
    """
    original = read_pgm(args.original).values
    description = read_pgm(args.intensity).values
    diff = read_residual_map(args.residual)
    if not original.shape == description.shape == diff.shape:
        raise DimensionMismatchError(
            f"sizes differ: original {original.shape}, intensity {description.shape}, residual {diff.shape}"
        )
    
    mismatched = int(np.count_nonzero(description + diff != original))
    if mismatched:
        raise ImageInfoError(f"reconstruction differs at {mismatched} pixels")
    logger.info("reconstruction exact: %dx%d", original.shape[1], original.shape[0])
    
    if args.manifest is not None:
        results = verify_manifest(args.manifest)
        changed = sorted(name for name, matches in results.items() if not matches)
        if changed:
            raise ImageInfoError(f"manifest mismatch: {', '.join(changed)}")
        logger.info("manifest verified: %d files in %s", len(results), args.manifest)
    print("ok")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("segment", help="segment every pyramid level and list its objects")
    add_run_options(parser)
    parser.add_argument("--residual", action="store_true", help="also write residual_L0.pgm")
    parser.set_defaults(handler=run_segment)
    
    parser = subparsers.add_parser("verify", help="check intensity + residual against the original")
    parser.add_argument("original", type=Path)
    parser.add_argument("intensity", type=Path)
    parser.add_argument("residual", type=Path)
    parser.add_argument("--manifest", type=Path, metavar="DIR", help="also re-check the digests in DIR/manifest.json")
    parser.set_defaults(handler=run_verify)
