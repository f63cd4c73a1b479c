"""
Per-level segmentation models: label map, characteristic intensity map,
and the residual of the two-part code.
"""
from dataclasses import dataclass
import numpy as np
from app.exceptions import GridError, DimensionMismatchError
from app.models.grid import freeze


@dataclass(frozen=True, eq=False)
class LabelMap:
    """Region label per pixel. Labels start at 1; ``next_label`` is unused."""
    
    labels: np.ndarray
    next_label: int
    
    def __post_init__(self):
        labels = freeze(self.labels, np.int64)
        if labels.ndim != 2 or labels.size == 0:
            raise GridError(f"label map must be a non-empty 2-D array, got shape {labels.shape}")
        if labels.min() < 1:
            raise GridError("every pixel must carry a label >= 1")
        if self.next_label <= labels.max():
            raise GridError(f"next_label {self.next_label} is already in use")
        object.__setattr__(self, "labels", labels)
    
    @property
    def width(self) -> int:
        return self.labels.shape[1]
    
    @property
    def height(self) -> int:
        return self.labels.shape[0]
    
    @property
    def label_set(self) -> np.ndarray:
        """Sorted distinct labels present in the map."""
        return np.unique(self.labels)
    
    def __repr__(self):
        return f"<LabelMap {self.width}x{self.height} labels={self.label_set.size}>"


@dataclass(frozen=True, eq=False)
class IntensityMap:
    """Characteristic intensity per pixel, constant over each label."""
    
    values: np.ndarray
    
    def __post_init__(self):
        object.__setattr__(self, "values", freeze(self.values, np.float64))
    
    @property
    def width(self) -> int:
        return self.values.shape[1]
    
    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class LevelSegmentation:
    level: int
    label_map: LabelMap
    intensity_map: IntensityMap
    
    def __post_init__(self):
        if self.label_map.labels.shape != self.intensity_map.values.shape:
            raise DimensionMismatchError(
                f"label map {self.label_map.labels.shape} and intensity map "
                f"{self.intensity_map.values.shape} differ"
            )
    
    @property
    def width(self) -> int:
        return self.label_map.width
    
    @property
    def height(self) -> int:
        return self.label_map.height
    
    @property
    def labels(self) -> np.ndarray:
        return self.label_map.labels
    
    def __repr__(self):
        return f"<LevelSegmentation L{self.level} {self.label_map!r}>"


@dataclass(frozen=True, eq=False)
class ResidualMap:
    """Signed difference between the original and its description."""
    
    residual: np.ndarray
    
    def __post_init__(self):
        object.__setattr__(self, "residual", freeze(self.residual, np.float64))
    
    def reconstruct(self, description: np.ndarray) -> np.ndarray:
        """Add the residual back onto ``description``."""
        if description.shape != self.residual.shape:
            raise DimensionMismatchError(
                f"description {description.shape} and residual {self.residual.shape} differ"
            )
        return description + self.residual
