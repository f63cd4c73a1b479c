"""
Top-level segmentation and the top-down expand-and-refine loop.

The coarsest pyramid level is segmented by marking high-information border
pixels, growing 4-connected clusters of similar gray level between them, and
attaching the border pixels to the nearest-intensity neighboring cluster.
Each lower level inherits the expanded label and intensity maps; pixels that
deviate from the reference grid are reassigned to a fitting neighbor or seed
a newly emerging object.

Determinism: every scan is in raster order and ties go to the lowest label.
Labels are never renumbered below the top level and minted labels always
exceed every label used before.
"""
import logging
from collections import deque
from typing import Dict, List, Tuple
import numpy as np
from scipy import ndimage
from app.exceptions import (
    DimensionMismatchError, GridError, NoInformationContentError, ThresholdError
)
from app.models.grid import ImageGrid
from app.models.pyramid import Pyramid
from app.models.segmentation import LabelMap, IntensityMap, LevelSegmentation, ResidualMap
from app.services.lowlevel import cumulative_histogram, local_info_map, prominence_thresholds
from app.services.pyramid import expand_array
from app.utils.pgm import quantize

logger = logging.getLogger(__name__)

FOUR_OFFSETS: Tuple[Tuple[int, int], ...] = ((0, -1), (-1, 0), (1, 0), (0, 1))


# ==================== Shared helpers ====================
def label_means(labels: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Mean reference value per label, indexed by label number."""
    flat = labels.ravel()
    counts = np.bincount(flat)
    sums = np.bincount(flat, weights=reference.ravel())
    return np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)


def _segmentation(level: int, labels: np.ndarray, next_label: int, reference: np.ndarray) -> LevelSegmentation:
    means = label_means(labels, reference)
    return LevelSegmentation(
        level=level,
        label_map=LabelMap(labels, next_label),
        intensity_map=IntensityMap(means[labels]),
    )


def _nearest_label(value: float, candidates, intensity) -> Tuple[float, int]:
    """``(distance, label)`` of the candidate closest in intensity; ties go low."""
    return min((abs(value - intensity[label]), label) for label in candidates)


def _grown(window: Tuple[slice, slice], shape: Tuple[int, int]) -> Tuple[slice, slice]:
    """Widen a ``find_objects`` window by one pixel on every side."""
    return tuple(
        slice(max(s.start - 1, 0), min(s.stop + 1, n)) for s, n in zip(window, shape)
    )


def _ring(mask: np.ndarray) -> np.ndarray:
    """Pixels 4-adjacent to ``mask`` but outside it."""
    return ndimage.binary_dilation(mask) & ~mask


# ==================== Top level ====================
def _grow_regions(values: np.ndarray, eligible: np.ndarray, delta: float) -> np.ndarray:
    """
    Region growing over ``eligible`` pixels. A pixel joins a cluster when it is
    within ``delta`` of the cluster's running mean. Unassigned pixels are 0.
    """
    height, width = values.shape
    gray = values.tolist()
    allowed = eligible.tolist()
    labels = [[0] * width for _ in range(height)]
    
    next_label = 1
    for y in range(height):
        for x in range(width):
            if not allowed[y][x] or labels[y][x]:
                continue
            labels[y][x] = next_label
            total, count = gray[y][x], 1
            queue = deque([(x, y)])
            while queue:
                cx, cy = queue.popleft()
                for dx, dy in FOUR_OFFSETS:
                    nx, ny = cx + dx, cy + dy
                    if not (0 <= nx < width and 0 <= ny < height):
                        continue
                    if not allowed[ny][nx] or labels[ny][nx]:
                        continue
                    if abs(gray[ny][nx] - total / count) <= delta:
                        labels[ny][nx] = next_label
                        total += gray[ny][nx]
                        count += 1
                        queue.append((nx, ny))
            next_label += 1
    
    return np.array(labels, dtype=np.int64)


def _attach_pending(values: np.ndarray, labels: np.ndarray, delta: float) -> np.ndarray:
    """
    Give every unassigned pixel the nearest-intensity 4-adjacent cluster.
    
    A pixel whose best neighbor is further than ``delta`` waits for a later
    pass; only when a pass attaches nothing is the nearest neighbor taken
    regardless of distance.
    """
    means = label_means(labels, values).tolist()
    height, width = values.shape
    gray = values.tolist()
    lab = labels.tolist()
    pending = [tuple(p) for p in np.argwhere(labels == 0)]
    
    strict = True
    while pending:
        waiting = []
        for y, x in pending:
            candidates = {
                lab[y + dy][x + dx]
                for dx, dy in FOUR_OFFSETS
                if 0 <= x + dx < width and 0 <= y + dy < height and lab[y + dy][x + dx]
            }
            if candidates:
                distance, label = _nearest_label(gray[y][x], candidates, means)
                if distance <= delta or not strict:
                    lab[y][x] = label
                    continue
            waiting.append((y, x))
        if len(waiting) == len(pending):
            if not strict:
                raise GridError("pixels left without any adjacent cluster")
            strict = False
        else:
            strict = True
        pending = waiting
    
    return np.array(lab, dtype=np.int64)


def _relabel_raster(labels: np.ndarray) -> np.ndarray:
    """Renumber labels 1..K in raster order of each label's first pixel."""
    present, first = np.unique(labels.ravel(), return_index=True)
    order = present[np.argsort(first)]
    lookup = np.zeros(labels.max() + 1, dtype=np.int64)
    lookup[order] = np.arange(1, order.size + 1)
    return lookup[labels]


def border_pixels(grid: ImageGrid, bin_count: int = 100, fraction: float = 0.85) -> np.ndarray:
    """High-information pixels outlining the principal fragments."""
    info = local_info_map(grid)
    try:
        hist = cumulative_histogram(info, bin_count)
    except NoInformationContentError:
        return np.zeros(grid.shape, dtype=bool)
    (threshold,) = prominence_thresholds(hist, [fraction])
    i_loc = info.i_loc.values
    return (i_loc > 0) & (i_loc >= threshold)


def top_level_segment(
    grid: ImageGrid,
    similarity_delta: float = 16.0,
    level: int = 0,
    bin_count: int = 100,
    border_fraction: float = 0.85,
) -> LevelSegmentation:
    """
    Coarse segmentation of the pyramid top.
    
    Raises:
        GridError: If the grid is smaller than 3x3
        ThresholdError: If ``similarity_delta <= 0``
    """
    if grid.width < 3 or grid.height < 3:
        raise GridError(f"top-level segmentation needs at least a 3x3 grid, got {grid.width}x{grid.height}")
    if not similarity_delta > 0:
        raise ThresholdError(f"similarity_delta must be > 0, got {similarity_delta}")
    
    border = border_pixels(grid, bin_count, border_fraction)
    if border.all():
        border[:] = False
    
    clusters = _grow_regions(grid.values, ~border, similarity_delta)
    clusters = _attach_pending(grid.values, clusters, similarity_delta)
    labels = _relabel_raster(clusters)
    
    seg = _segmentation(level, labels, int(labels.max()) + 1, grid.values)
    logger.info(
        "top level %d (%dx%d): %d border pixels, %d regions",
        level, grid.width, grid.height, int(border.sum()), int(labels.max()),
    )
    return seg


# ==================== Top-down refinement ====================
def deviant_pixels(expanded_intensity: IntensityMap, reference: ImageGrid, delta: float) -> np.ndarray:
    """
    Boolean mask of pixels whose expanded characteristic intensity differs
    from the reference by more than ``delta``.
    
    Raises:
        DimensionMismatchError: If the two maps differ in size
    """
    if expanded_intensity.values.shape != reference.shape:
        raise DimensionMismatchError(
            f"intensity map {expanded_intensity.values.shape} and reference {reference.shape} differ"
        )
    return np.abs(expanded_intensity.values - reference.values) > delta


def _reassign(
    labels: np.ndarray,
    deviant: np.ndarray,
    reference: np.ndarray,
    intensity: Dict[int, float],
    delta: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Raster passes that move each deviant pixel to the nearest-intensity
    label among its resolved 4-neighbors, when that label fits within
    ``delta``. Pixels resolved earlier in a pass count as resolved.
    
    Returns:
        tuple: (labels, still_deviant)
    """
    height, width = labels.shape
    gray = reference.tolist()
    lab = labels.tolist()
    resolved = (~deviant).tolist()
    pending = [tuple(p) for p in np.argwhere(deviant)]
    
    passes = 0
    while pending:
        waiting = []
        for y, x in pending:
            candidates = {
                lab[y + dy][x + dx]
                for dx, dy in FOUR_OFFSETS
                if 0 <= x + dx < width and 0 <= y + dy < height and resolved[y + dy][x + dx]
            }
            if candidates:
                distance, label = _nearest_label(gray[y][x], candidates, intensity)
                if distance <= delta:
                    lab[y][x] = label
                    resolved[y][x] = True
                    continue
            waiting.append((y, x))
        passes += 1
        logger.debug("reassignment pass %d: %d -> %d deviant", passes, len(pending), len(waiting))
        if len(waiting) == len(pending):
            break
        pending = waiting
    
    return np.array(lab, dtype=np.int64), ~np.array(resolved, dtype=bool)


def _seed_or_absorb(
    labels: np.ndarray,
    remaining: np.ndarray,
    reference: np.ndarray,
    intensity: Dict[int, float],
    seed_min_size: int,
    next_label: int,
) -> Tuple[np.ndarray, int]:
    """
    Turn each leftover deviant component into a new object when it is large
    enough; otherwise merge it into the nearest-intensity adjacent label.
    """
    labels = labels.copy()
    components, count = ndimage.label(remaining)
    minted = 0
    
    for index, window in enumerate(ndimage.find_objects(components), start=1):
        window = _grown(window, labels.shape)
        mask = components[window] == index
        ring = _ring(mask)
        
        if mask.sum() >= seed_min_size or not ring.any():
            labels[window][mask] = next_label
            next_label += 1
            minted += 1
            continue
        
        value = float(reference[window][mask].mean())
        candidates = set(np.unique(labels[window][ring]).tolist())
        labels[window][mask] = _nearest_label(value, candidates, intensity)[1]
    
    logger.debug("%d leftover components, %d new objects", count, minted)
    return labels, next_label


def _box_union(box: Tuple[slice, slice], window: Tuple[slice, slice], mask: np.ndarray) -> Tuple[slice, slice]:
    """Bounding box covering ``box`` and the ``mask`` pixels of ``window``."""
    ys, xs = np.nonzero(mask)
    y0, x0 = window[0].start, window[1].start
    top, bottom = y0 + int(ys.min()), y0 + int(ys.max()) + 1
    left, right = x0 + int(xs.min()), x0 + int(xs.max()) + 1
    if box is None:
        return slice(top, bottom), slice(left, right)
    return (
        slice(min(box[0].start, top), max(box[0].stop, bottom)),
        slice(min(box[1].start, left), max(box[1].stop, right)),
    )


def _repair_connectivity(
    labels: np.ndarray,
    reference: np.ndarray,
    seed_min_size: int,
    next_label: int,
) -> Tuple[np.ndarray, int]:
    """
    Keep every label a single 4-connected region. The largest piece keeps
    the label; detached pieces become new objects or merge into a neighbor.
    """
    labels = labels.copy()
    means = dict(enumerate(label_means(labels, reference).tolist()))
    boxes = {
        label: window
        for label, window in enumerate(ndimage.find_objects(labels), start=1)
        if window is not None
    }
    
    for label in sorted(boxes):
        window = _grown(boxes[label], labels.shape)
        view = labels[window]
        pieces, count = ndimage.label(view == label)
        if count <= 1:
            continue
        
        sizes = np.bincount(pieces.ravel())[1:]
        keep = int(np.argmax(sizes)) + 1
        for piece in range(1, count + 1):
            if piece == keep:
                continue
            mask = pieces == piece
            value = float(reference[window][mask].mean())
            if sizes[piece - 1] >= seed_min_size:
                target = next_label
                next_label += 1
                means[target] = value
            else:
                candidates = set(np.unique(view[_ring(mask)]).tolist())
                target = _nearest_label(value, candidates, means)[1]
            view[mask] = target
            # the target may grow beyond its recorded box
            boxes[target] = _box_union(boxes.get(target), window, mask)
    
    return labels, next_label


def refine_level(
    parent: LevelSegmentation,
    reference: ImageGrid,
    delta: float = 16.0,
    seed_min_size: int = 4,
) -> LevelSegmentation:
    """
    Expand ``parent`` onto the next finer level and refine it against
    ``reference``.
    
    Raises:
        DimensionMismatchError: If ``reference`` is not a 2x expansion of ``parent``
    """
    width, height = reference.width, reference.height
    labels = expand_array(parent.labels, width, height)
    expanded = IntensityMap(expand_array(parent.intensity_map.values, width, height))
    deviant = deviant_pixels(expanded, reference, delta)
    
    present, first = np.unique(parent.labels.ravel(), return_index=True)
    parent_intensity = parent.intensity_map.values.ravel()[first]
    intensity = dict(zip(present.tolist(), parent_intensity.tolist()))
    
    labels, remaining = _reassign(labels, deviant, reference.values, intensity, delta)
    next_label = parent.label_map.next_label
    labels, next_label = _seed_or_absorb(
        labels, remaining, reference.values, intensity, seed_min_size, next_label
    )
    labels, next_label = _repair_connectivity(labels, reference.values, seed_min_size, next_label)
    
    seg = _segmentation(parent.level - 1, labels, next_label, reference.values)
    logger.info(
        "level %d (%dx%d): %d deviant, %d unresolved, %d labels minted",
        seg.level, width, height, int(deviant.sum()), int(remaining.sum()),
        next_label - parent.label_map.next_label,
    )
    return seg


def segment_full(
    pyramid: Pyramid,
    similarity_delta: float = 16.0,
    refine_delta: float = 16.0,
    seed_min_size: int = 4,
    bin_count: int = 100,
    border_fraction: float = 0.85,
) -> List[LevelSegmentation]:
    """Segment the pyramid top, then refine down to level 0 (top first)."""
    result = [
        top_level_segment(
            pyramid.top, similarity_delta, level=pyramid.top_level,
            bin_count=bin_count, border_fraction=border_fraction,
        )
    ]
    for level in range(pyramid.top_level - 1, -1, -1):
        result.append(refine_level(result[-1], pyramid[level], refine_delta, seed_min_size))
    return result


def residual(original: ImageGrid, seg: LevelSegmentation, quantized: bool = False) -> ResidualMap:
    """
    Residual of the two-part code: ``original - intensity_map``.
    
    With ``quantized=True`` the description is the 8-bit rounded intensity
    map, as written to disk.
    
    Raises:
        DimensionMismatchError: If the sizes differ
    """
    description = seg.intensity_map.values
    if description.shape != original.shape:
        raise DimensionMismatchError(
            f"original {original.shape} and segmentation {description.shape} differ"
        )
    if quantized:
        description = quantize(description)
    return ResidualMap(original.values - description)


def describe(seg: LevelSegmentation, quantized: bool = False) -> np.ndarray:
    """The description half of the two-part code."""
    values = seg.intensity_map.values
    return quantize(values) if quantized else values
