"""
Low-level (local) image information content.

For every interior pixel:

    I_int  mean absolute difference to the neighbors that differ from it
    status 1 if 8*g_c - sum(g_i) >= 0, else 0
    I_top  m * (8 - m), m = neighbors sharing the center's status
    I_loc  I_int * I_top

Border pixels have status 1 and zero in every information map. The status
map is fully built before the I_top pass reads it.
"""
import logging
import math
from typing import Iterable, List, Sequence
import numpy as np
from app.exceptions import GridError, NoInformationContentError, ThresholdError
from app.models.grid import ImageGrid, Neighborhood3x3
from app.models.lowlevel import (
    StatusMap, InfoMaps, CumulativeHistogram, Tier, TierMap, EdgeMark, EdgeMap
)
from app.services.grid import neighbor_stack

logger = logging.getLogger(__name__)

DEFAULT_FRACTIONS = (0.50, 0.70, 0.85)


def status_map(grid: ImageGrid) -> StatusMap:
    """Binary status of every pixel (border pixels are 1)."""
    values = grid.values
    status = np.ones(values.shape, dtype=np.uint8)
    if grid.width >= 3 and grid.height >= 3:
        stat = 8.0 * values[1:-1, 1:-1] - neighbor_stack(values).sum(axis=0)
        status[1:-1, 1:-1] = stat >= 0
    return StatusMap(status)


def intensity_info(nbhd: Neighborhood3x3) -> float:
    """
    Mean absolute difference between the center and the neighbors that
    differ from it; 0 when no neighbor differs.
    """
    if not nbhd.interior:
        raise GridError("intensity information needs a full 3x3 neighborhood")
    diffs = [abs(nbhd.center - g) for g in nbhd.neighbors]
    diffs = [d for d in diffs if d > 0]
    if not diffs:
        return 0.0
    return sum(diffs) / len(diffs)


def topology_info(status_nbhd: Sequence[Sequence[int]]) -> int:
    """``m * (8 - m)`` over a 3x3 block of status bits."""
    block = np.asarray(status_nbhd)
    if block.shape != (3, 3):
        raise GridError(f"expected a 3x3 status block, got shape {block.shape}")
    m = int(np.count_nonzero(block == block[1, 1])) - 1
    return m * (8 - m)


def local_info_map(grid: ImageGrid) -> InfoMaps:
    """
    Status, I_int, I_top and I_loc maps of ``grid``.
    
    Raises:
        GridError: If the grid is smaller than 3x3
    """
    if grid.width < 3 or grid.height < 3:
        raise GridError(f"local information needs at least a 3x3 grid, got {grid.width}x{grid.height}")
    
    values = grid.values
    status = status_map(grid)
    
    center = values[1:-1, 1:-1]
    diffs = np.abs(neighbor_stack(values) - center)
    n = np.count_nonzero(diffs > 0, axis=0)
    total = diffs.sum(axis=0)
    i_int_inner = np.divide(total, n, out=np.zeros_like(total), where=n > 0)
    
    bits = status.values
    m = np.count_nonzero(neighbor_stack(bits) == bits[1:-1, 1:-1], axis=0)
    i_top_inner = (m * (8 - m)).astype(np.float64)
    
    i_int = np.zeros(values.shape)
    i_top = np.zeros(values.shape)
    i_int[1:-1, 1:-1] = i_int_inner
    i_top[1:-1, 1:-1] = i_top_inner
    i_loc = i_int * i_top
    
    return InfoMaps(status=status, i_int=ImageGrid(i_int), i_top=ImageGrid(i_top), i_loc=ImageGrid(i_loc))


def cumulative_histogram(info: InfoMaps, bin_count: int = 100) -> CumulativeHistogram:
    """
    Cumulative histogram of I_loc mass.
    
    The axis spans ``[0, 3 * mean(I_loc)]`` in ``bin_count`` equal bins. Each
    value is added to every bin whose lower bound it meets, so values above
    the axis top reach all bins.
    
    Raises:
        ThresholdError: If ``bin_count < 2``
        NoInformationContentError: If every I_loc value is zero
    """
    if bin_count < 2:
        raise ThresholdError(f"bin_count must be >= 2, got {bin_count}")
    
    total = info.total
    if not total > 0:
        raise NoInformationContentError()
    
    values = info.i_loc.values.ravel()
    bin_width = 3.0 * (total / values.size) / bin_count
    lower_bounds = np.arange(bin_count, dtype=np.float64) * bin_width
    
    ascending = np.sort(values)
    at_or_above = ascending.size - np.searchsorted(ascending, lower_bounds, side="left")
    # bin masses are prefixes of the descending values, summed exactly
    descending = ascending[::-1].tolist()
    sums = {}
    for count in set(at_or_above.tolist()):
        sums[count] = math.fsum(descending[:count])
    bins = np.array([sums[count] for count in at_or_above.tolist()], dtype=np.float64)
    
    return CumulativeHistogram(
        bin_count=bin_count,
        bin_width=bin_width,
        bins=bins,
        normalized=bins / bins[0],
    )


def prominence_thresholds(
    hist: CumulativeHistogram,
    fractions: Iterable[float] = DEFAULT_FRACTIONS,
) -> List[float]:
    """
    For each fraction ``f`` the largest bin lower bound whose normalized
    cumulative mass is still ``>= f``. Smaller fractions give higher
    thresholds.
    
    Raises:
        ThresholdError: If a fraction is outside (0, 1)
    """
    lower_bounds = hist.lower_bounds
    thresholds = []
    for f in fractions:
        if not 0.0 < f < 1.0:
            raise ThresholdError(f"fraction {f} is outside (0, 1)")
        index = int(np.flatnonzero(hist.normalized >= f).max())
        thresholds.append(float(lower_bounds[index]))
    return thresholds


def prominence_mark(info: InfoMaps, thresholds: Sequence[float]) -> TierMap:
    """
    Assign prominence tiers from three descending thresholds
    ``(t50, t70, t85)``. Pixels without information are never marked.
    
    Raises:
        ThresholdError: If the thresholds are not ``t50 >= t70 >= t85 >= 0``
    """
    if len(thresholds) != 3:
        raise ThresholdError(f"expected three thresholds, got {len(thresholds)}")
    t50, t70, t85 = thresholds
    if not t50 >= t70 >= t85 >= 0:
        raise ThresholdError(f"thresholds must satisfy t50 >= t70 >= t85 >= 0, got {tuple(thresholds)}")
    
    v = info.i_loc.values
    positive = v > 0
    tiers = np.select(
        [positive & (v >= t50), positive & (v >= t70), positive & (v >= t85)],
        [Tier.TIER50, Tier.TIER70, Tier.TIER85],
        default=Tier.NONE,
    )
    return TierMap(tiers)


def default_edge_threshold(hist: CumulativeHistogram, thresholds: Sequence[float]) -> float:
    """The least prominent tier threshold, never below one bin width."""
    return max(min(thresholds), hist.bin_width)


def edge_map(info: InfoMaps, status: StatusMap, threshold: float) -> EdgeMap:
    """
    Double-line edge map: pixels with ``I_loc >= threshold`` are marked on
    their side of the gradient (status 0 is the darker side).
    
    Raises:
        ThresholdError: If ``threshold <= 0``
    """
    if not threshold > 0:
        raise ThresholdError(f"edge threshold must be > 0, got {threshold}")
    
    marked = info.i_loc.values >= threshold
    sides = np.where(status.values == 0, EdgeMark.LOW_SIDE, EdgeMark.HIGH_SIDE)
    edges = np.where(marked, sides, EdgeMark.NONE)
    logger.info("edge map: %d pixels at threshold %.6g", int(marked.sum()), threshold)
    return EdgeMap(edges)
