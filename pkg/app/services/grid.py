"""
Grid construction and 3x3 neighborhood access.
"""
from typing import Sequence
import numpy as np
from app.exceptions import GridError, OutOfBoundsError
from app.models.grid import ImageGrid, Neighborhood3x3, NEIGHBOR_OFFSETS


def new_grid(width: int, height: int, values: Sequence[float]) -> ImageGrid:
    """
    Build a grid from a row-major value sequence.
    
    Args:
        width: Columns (> 0)
        height: Rows (> 0)
        values: ``width * height`` gray levels, row-major
        
    Raises:
        GridError: On a dimension mismatch or a non-finite sample
    """
    if width <= 0 or height <= 0:
        raise GridError(f"grid dimensions must be positive, got {width}x{height}")
    
    flat = np.asarray(values, dtype=np.float64).ravel()
    if flat.size != width * height:
        raise GridError(
            f"expected {width * height} values for a {width}x{height} grid, got {flat.size}"
        )
    
    bad = np.flatnonzero(~np.isfinite(flat))
    if bad.size:
        raise GridError(f"non-finite value at index {int(bad[0])}", index=int(bad[0]))
    
    return ImageGrid(flat.reshape(height, width))


def from_array(array: np.ndarray) -> ImageGrid:
    """Wrap a 2-D ``[y, x]`` array, applying the same checks as ``new_grid``."""
    array = np.asarray(array)
    if array.ndim != 2:
        raise GridError(f"expected a 2-D array, got shape {array.shape}")
    height, width = array.shape
    return new_grid(width, height, array.ravel())


def is_interior(grid: ImageGrid, x: int, y: int) -> bool:
    return 1 <= x < grid.width - 1 and 1 <= y < grid.height - 1


def neighborhood(grid: ImageGrid, x: int, y: int) -> Neighborhood3x3:
    """
    3x3 neighborhood of ``(x, y)``.
    
    Border pixels come back with ``interior=False`` and no neighbors;
    callers decide how to treat them.
    
    Raises:
        OutOfBoundsError: If ``(x, y)`` is outside the grid
    """
    if not grid.contains(x, y):
        raise OutOfBoundsError(f"({x}, {y}) is outside the {grid.width}x{grid.height} grid")
    
    center = grid.at(x, y)
    if not is_interior(grid, x, y):
        return Neighborhood3x3(center=center, neighbors=(), interior=False)
    
    neighbors = tuple(grid.at(x + dx, y + dy) for dx, dy in NEIGHBOR_OFFSETS)
    return Neighborhood3x3(center=center, neighbors=neighbors, interior=True)


def neighbor_stack(values: np.ndarray) -> np.ndarray:
    """
    Neighbors of every interior pixel as an ``(8, h-2, w-2)`` array in
    ``NEIGHBOR_OFFSETS`` order.
    """
    windows = np.lib.stride_tricks.sliding_window_view(values, (3, 3))
    return np.stack([windows[:, :, 1 + dy, 1 + dx] for dx, dy in NEIGHBOR_OFFSETS])
