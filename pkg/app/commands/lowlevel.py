"""
`lowlevel`, `edges` and `tiers`: local information content of the input image.
"""
import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import List
from app.commands.options import add_run_options, finish_run
from app.dependencies import get_run_config, load_grid, prepare_output
from app.models.lowlevel import CumulativeHistogram, InfoMaps, Tier
from app.schemas import LowLevelSummary, RunConfig
from app.services.lowlevel import (
    cumulative_histogram,
    default_edge_threshold,
    edge_map,
    local_info_map,
    prominence_mark,
    prominence_thresholds,
)
from app.utils.export import (
    write_edge_map,
    write_gray_map,
    write_histogram_csv,
    write_json,
    write_status_map,
    write_tier_map,
)


@dataclass(frozen=True)
class _Analysis:
    config: RunConfig
    info: InfoMaps
    hist: CumulativeHistogram
    thresholds: List[float]
    out: Path


def _analyse(args: argparse.Namespace) -> _Analysis:
    config = get_run_config(args)
    info = local_info_map(load_grid(args.input))
    hist = cumulative_histogram(info, config.bin_count)
    thresholds = prominence_thresholds(hist, config.fractions)
    return _Analysis(config, info, hist, thresholds, prepare_output(config))


def run_lowlevel(args: argparse.Namespace) -> int:
    """Information maps, histogram CSV and the low-level summary."""
    a = _analyse(args)
    tiers = prominence_mark(a.info, a.thresholds)
    written = [
        write_gray_map(a.info.i_int.values, a.out / "i_int.pgm"),
        write_gray_map(a.info.i_top.values, a.out / "i_top.pgm"),
        write_gray_map(a.info.i_loc.values, a.out / "i_loc.pgm"),
        write_status_map(a.info.status, a.out / "status.pgm"),
        write_histogram_csv(a.hist, a.out / "histogram.csv"),
    ]
    summary = LowLevelSummary(
        width=a.info.width,
        height=a.info.height,
        total_information=a.info.total,
        mean_information=a.info.total / (a.info.width * a.info.height),
        bin_count=a.hist.bin_count,
        bin_width=a.hist.bin_width,
        fractions=a.config.fractions,
        thresholds=a.thresholds,
        edge_threshold=default_edge_threshold(a.hist, a.thresholds),
        tier_pixels=[tiers.count(Tier.TIER50), tiers.count(Tier.TIER70), tiers.count(Tier.TIER85)],
    )
    written.append(write_json(summary, a.out / "lowlevel.json"))
    finish_run(a.config, written)
    return 0


def run_edges(args: argparse.Namespace) -> int:
    """Double-line edge map at the least prominent tier threshold."""
    a = _analyse(args)
    threshold = args.threshold if args.threshold is not None else default_edge_threshold(a.hist, a.thresholds)
    edges = edge_map(a.info, a.info.status, threshold)
    finish_run(a.config, [write_edge_map(edges, a.out / "edges.pgm")])
    return 0


def run_tiers(args: argparse.Namespace) -> int:
    """Prominence tier map."""
    a = _analyse(args)
    tiers = prominence_mark(a.info, a.thresholds)
    finish_run(a.config, [write_tier_map(tiers, a.out / "tiers.pgm")])
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("lowlevel", help="information content maps and histogram")
    add_run_options(parser)
    parser.set_defaults(handler=run_lowlevel)
    
    parser = subparsers.add_parser("edges", help="double-line edge map")
    add_run_options(parser)
    parser.add_argument("--threshold", type=float, help="I_loc edge threshold (default: t85)")
    parser.set_defaults(handler=run_edges)
    
    parser = subparsers.add_parser("tiers", help="prominence tier map")
    add_run_options(parser)
    parser.set_defaults(handler=run_tiers)
