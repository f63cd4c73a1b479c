"""
Flags shared by every pipeline subcommand.
"""
import argparse
import logging
from pathlib import Path
from typing import List
from app.schemas import RunConfig
from app.services.hashing import write_manifest

logger = logging.getLogger(__name__)


def add_run_options(parser: argparse.ArgumentParser) -> None:
    """Input path plus run configuration flags; unset flags use the settings defaults."""
    parser.add_argument("input", type=Path, help="input PGM image (P2 or P5, maxval <= 255)")
    parser.add_argument("--top-size", type=int, help="minimum side of the pyramid top level")
    parser.add_argument("--delta-sim", type=float, help="top-level region growing tolerance")
    parser.add_argument("--delta-refine", type=float, help="top-down deviation tolerance")
    parser.add_argument("--seed-min", type=int, help="smallest newly emerging object, in pixels")
    parser.add_argument("--bins", type=int, help="cumulative histogram bin count")
    parser.add_argument("--fractions", help="three captured-content fractions, e.g. 0.5,0.7,0.85")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument(
        "--rescale", action="store_true", default=None,
        help="upsample level maps to the input size",
    )


def finish_run(config: RunConfig, written: List[Path]) -> Path:
    """Write the manifest for everything a command produced."""
    manifest = write_manifest(config.output_dir, written)
    logger.info("wrote %d files to %s", len(written), config.output_dir)
    return manifest
