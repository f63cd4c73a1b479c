"""
`pyramid`: write every pyramid level as a PGM.
"""
import argparse
from pathlib import Path
from typing import List
from app.commands.options import add_run_options, finish_run
from app.dependencies import get_run_config, load_grid, prepare_output
from app.services.pyramid import build_pyramid, rescale_to
from app.utils.export import write_gray_map


def run(args: argparse.Namespace) -> int:
    config = get_run_config(args)
    pyramid = build_pyramid(load_grid(args.input), config.top_target)
    out = prepare_output(config)
    
    written: List[Path] = []
    for level, grid in enumerate(pyramid.levels):
        values = rescale_to(grid.values, pyramid, level) if config.rescale else grid.values
        written.append(write_gray_map(values, out / f"level_L{level}.pgm"))
    
    finish_run(config, written)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("pyramid", help="build the multi-stage image pyramid")
    add_run_options(parser)
    parser.set_defaults(handler=run)
