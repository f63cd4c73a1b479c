"""
Writers for derived maps, histogram CSV and JSON documents.
"""
import csv
from pathlib import Path
from typing import Dict
import numpy as np
from pydantic import BaseModel
from app.models.grid import ImageGrid
from app.models.lowlevel import CumulativeHistogram, EdgeMap, EdgeMark, StatusMap, Tier, TierMap
from app.utils.pgm import PathLike, quantize, read_pgm, write_pgm

# Most prominent tier is darkest
TIER_PALETTE: Dict[int, int] = {
    Tier.NONE: 255,
    Tier.TIER85: 170,
    Tier.TIER70: 85,
    Tier.TIER50: 0,
}

EDGE_PALETTE: Dict[int, int] = {
    EdgeMark.NONE: 255,
    EdgeMark.LOW_SIDE: 64,
    EdgeMark.HIGH_SIDE: 192,
}

RESIDUAL_OFFSET = 32768


def _paint(values: np.ndarray, palette: Dict[int, int]) -> np.ndarray:
    lookup = np.zeros(max(palette) + 1, dtype=np.int64)
    for key, gray in palette.items():
        lookup[int(key)] = gray
    return lookup[values]


def write_gray_map(values: np.ndarray, path: PathLike) -> Path:
    """Gray map rounded half up, 8-bit when it fits in 255, otherwise 16-bit."""
    if isinstance(values, ImageGrid):
        values = values.values
    maxval = 255 if quantize(values, 65535).max() <= 255 else 65535
    return write_pgm(values, path, maxval=maxval)


def write_label_map(labels: np.ndarray, path: PathLike) -> Path:
    """Labels as samples; more than 255 labels switches to 16-bit."""
    maxval = 255 if labels.max() <= 255 else 65535
    return write_pgm(labels.astype(np.int64), path, maxval=maxval)


def write_status_map(status: StatusMap, path: PathLike) -> Path:
    return write_pgm(status.values.astype(np.int64) * 255, path)


def write_tier_map(tiers: TierMap, path: PathLike) -> Path:
    return write_pgm(_paint(tiers.values, TIER_PALETTE), path)


def write_edge_map(edges: EdgeMap, path: PathLike) -> Path:
    return write_pgm(_paint(edges.values, EDGE_PALETTE), path)


def write_residual_map(residual: np.ndarray, path: PathLike) -> Path:
    """Signed integer residual stored as ``value + 32768`` in 16-bit P5."""
    return write_pgm(residual + RESIDUAL_OFFSET, path, maxval=65535)


def read_residual_map(path: PathLike) -> np.ndarray:
    return read_pgm(path, allow_16bit=True).values - RESIDUAL_OFFSET


def write_histogram_csv(hist: CumulativeHistogram, path: PathLike) -> Path:
    """Columns ``lower_bound,sum,normalized``, 9 significant digits."""
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["lower_bound", "sum", "normalized"])
        for row in zip(hist.lower_bounds, hist.bins, hist.normalized):
            writer.writerow([f"{value:.9g}" for value in row])
    return path


def write_json(document: BaseModel, path: PathLike) -> Path:
    path = Path(path)
    path.write_text(document.model_dump_json(indent=2) + "\n")
    return path
