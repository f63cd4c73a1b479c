"""
Raster container shared by every stage of the pipeline.

Arrays are stored row-major as ``values[y, x]`` with x growing right and y
growing down. Every model freezes its arrays on construction.
"""
from dataclasses import dataclass
from typing import Tuple
import numpy as np
from app.exceptions import GridError

# (dx, dy) clockwise from the top-left neighbor
NEIGHBOR_OFFSETS: Tuple[Tuple[int, int], ...] = (
    (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0),
)


def freeze(array, dtype) -> np.ndarray:
    """Return a read-only 2-D copy of ``array`` with the given dtype."""
    frozen = np.array(array, dtype=dtype, copy=True)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True, eq=False)
class ImageGrid:
    """2-D raster of real-valued gray levels (nominal range 0..255)."""
    
    values: np.ndarray
    
    def __post_init__(self):
        values = freeze(self.values, np.float64)
        if values.ndim != 2 or values.shape[0] == 0 or values.shape[1] == 0:
            raise GridError(f"grid must be a non-empty 2-D array, got shape {values.shape}")
        object.__setattr__(self, "values", values)
    
    @property
    def width(self) -> int:
        return self.values.shape[1]
    
    @property
    def height(self) -> int:
        return self.values.shape[0]
    
    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape
    
    def at(self, x: int, y: int) -> float:
        """Gray level at column ``x``, row ``y``."""
        return float(self.values[y, x])
    
    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height
    
    def __repr__(self):
        return f"<ImageGrid {self.width}x{self.height}>"


@dataclass(frozen=True)
class Neighborhood3x3:
    """A pixel and its eight neighbors in ``NEIGHBOR_OFFSETS`` order.
    
    Border pixels carry ``interior=False`` and no neighbor values.
    """
    
    center: float
    neighbors: Tuple[float, ...]
    interior: bool
    
    def __post_init__(self):
        if self.interior and len(self.neighbors) != 8:
            raise GridError("an interior neighborhood has exactly 8 neighbors")
