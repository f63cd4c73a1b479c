"""
Per-pixel information content maps and their derived products.
"""
import math
from dataclasses import dataclass
from enum import IntEnum
import numpy as np
from app.models.grid import ImageGrid, freeze


@dataclass(frozen=True, eq=False)
class StatusMap:
    """Binary status per pixel: 1 where ``8*g_c - sum(g_i) >= 0``, else 0."""
    
    values: np.ndarray
    
    def __post_init__(self):
        object.__setattr__(self, "values", freeze(self.values, np.uint8))
    
    @property
    def width(self) -> int:
        return self.values.shape[1]
    
    @property
    def height(self) -> int:
        return self.values.shape[0]
    
    def __repr__(self):
        return f"<StatusMap {self.width}x{self.height}>"


@dataclass(frozen=True, eq=False)
class InfoMaps:
    """Status map plus the I_int, I_top and I_loc maps of one grid.
    
    Border pixels are zero in all three information maps.
    """
    
    status: StatusMap
    i_int: ImageGrid
    i_top: ImageGrid
    i_loc: ImageGrid
    
    @property
    def width(self) -> int:
        return self.i_loc.width
    
    @property
    def height(self) -> int:
        return self.i_loc.height
    
    @property
    def total(self) -> float:
        """Total low-level information content (correctly rounded sum of I_loc)."""
        return math.fsum(self.i_loc.values.ravel().tolist())
    
    def __repr__(self):
        return f"<InfoMaps {self.width}x{self.height}>"


@dataclass(frozen=True, eq=False)
class CumulativeHistogram:
    """Cumulative I_loc mass over ``bin_count`` bins spanning ``[0, 3*mean]``.
    
    ``bins[b]`` is the sum of all I_loc values at or above the lower bound of
    bin ``b``; ``normalized`` divides by ``bins[0]``.
    """
    
    bin_count: int
    bin_width: float
    bins: np.ndarray
    normalized: np.ndarray
    
    def __post_init__(self):
        object.__setattr__(self, "bins", freeze(self.bins, np.float64))
        object.__setattr__(self, "normalized", freeze(self.normalized, np.float64))
    
    @property
    def lower_bounds(self) -> np.ndarray:
        return np.arange(self.bin_count, dtype=np.float64) * self.bin_width
    
    @property
    def total(self) -> float:
        return float(self.bins[0])
    
    @property
    def bin_masses(self) -> np.ndarray:
        """Fraction of the total carried by values falling in each single bin."""
        tail = np.append(self.normalized[1:], 0.0)
        return self.normalized - tail
    
    def __repr__(self):
        return f"<CumulativeHistogram bins={self.bin_count} width={self.bin_width:.6g}>"


class Tier(IntEnum):
    """Prominence tier; higher value means more prominent."""
    
    NONE = 0
    TIER85 = 1
    TIER70 = 2
    TIER50 = 3


@dataclass(frozen=True, eq=False)
class TierMap:
    values: np.ndarray
    
    def __post_init__(self):
        object.__setattr__(self, "values", freeze(self.values, np.uint8))
    
    def count(self, tier: Tier) -> int:
        return int(np.count_nonzero(self.values == tier))
    
    def __repr__(self):
        return f"<TierMap {self.values.shape[1]}x{self.values.shape[0]}>"


class EdgeMark(IntEnum):
    NONE = 0
    LOW_SIDE = 1
    HIGH_SIDE = 2


@dataclass(frozen=True, eq=False)
class EdgeMap:
    """Double-line edge map; each line carries the side of the gradient it lies on."""
    
    values: np.ndarray
    
    def __post_init__(self):
        object.__setattr__(self, "values", freeze(self.values, np.uint8))
    
    def count(self, mark: EdgeMark) -> int:
        return int(np.count_nonzero(self.values == mark))
    
    def __repr__(self):
        return f"<EdgeMap {self.values.shape[1]}x{self.values.shape[0]}>"
