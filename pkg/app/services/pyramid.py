"""
Multi-stage image pyramid: Reduce (4-to-1 block mean) and Expand
(parent value copied to its four children).
"""
import logging
import numpy as np
from app.exceptions import DimensionMismatchError, GridError
from app.models.grid import ImageGrid
from app.models.pyramid import Pyramid

logger = logging.getLogger(__name__)


def _half(n: int) -> int:
    return (n + 1) // 2


def reduce(grid: ImageGrid) -> ImageGrid:
    """
    Average each 2x2 child block into one parent pixel.
    
    Odd dimensions are padded by replicating the last row/column, so the
    output is ``ceil(w/2) x ceil(h/2)`` and constants stay constant.
    """
    values = grid.values
    pad_y = values.shape[0] % 2
    pad_x = values.shape[1] % 2
    if pad_y or pad_x:
        values = np.pad(values, ((0, pad_y), (0, pad_x)), mode="edge")
    
    h, w = values.shape
    blocks = values.reshape(h // 2, 2, w // 2, 2)
    # pairwise sum keeps constant blocks exact
    parent = ((blocks[:, 0, :, 0] + blocks[:, 0, :, 1]) + (blocks[:, 1, :, 0] + blocks[:, 1, :, 1])) / 4.0
    return ImageGrid(parent)


def expand_array(values: np.ndarray, target_w: int, target_h: int) -> np.ndarray:
    """Nearest-neighbor 2x upsampling of any 2-D array (labels included)."""
    if _half(target_w) != values.shape[1] or _half(target_h) != values.shape[0]:
        raise DimensionMismatchError(
            f"cannot expand {values.shape[1]}x{values.shape[0]} to {target_w}x{target_h}"
        )
    rows = np.arange(target_h) // 2
    cols = np.arange(target_w) // 2
    return values[rows[:, np.newaxis], cols]


def expand(grid: ImageGrid, target_w: int, target_h: int) -> ImageGrid:
    """
    Reversed Reduce: child ``(x, y)`` takes parent ``(x//2, y//2)``.
    
    Raises:
        DimensionMismatchError: If the target does not ceil-halve to the grid
    """
    return ImageGrid(expand_array(grid.values, target_w, target_h))


def level_count(width: int, height: int, top_target: int) -> int:
    """
    Number of pyramid levels, level 0 included.
    
    Halving continues while the next level's smaller side would still be at
    least ``top_target``; a 640x480 input with target 12 gives 6 levels.
    """
    if width < 1 or height < 1 or top_target < 1:
        raise GridError("width, height and top_target must all be >= 1")
    
    count = 1
    side = min(width, height)
    while side > 1 and _half(side) >= top_target:
        side = _half(side)
        count += 1
    return count


def build_pyramid(grid: ImageGrid, top_target: int) -> Pyramid:
    """Repeatedly reduce ``grid`` until ``level_count`` levels exist."""
    count = level_count(grid.width, grid.height, top_target)
    
    levels = [grid]
    for _ in range(count - 1):
        levels.append(reduce(levels[-1]))
    
    pyramid = Pyramid(levels=tuple(levels), top_target=top_target)
    logger.info("built %r", pyramid)
    return pyramid


def rescale_to(values: np.ndarray, pyramid: Pyramid, level: int) -> np.ndarray:
    """Chain ``expand`` from ``level`` down to level 0 dimensions."""
    for lower in range(level - 1, -1, -1):
        width, height = pyramid.dims[lower]
        values = expand_array(values, width, height)
    return values
