"""Models package."""
from app.models.grid import ImageGrid, Neighborhood3x3
from app.models.pyramid import Pyramid
from app.models.lowlevel import (
    StatusMap, InfoMaps, CumulativeHistogram, Tier, TierMap, EdgeMark, EdgeMap
)
from app.models.segmentation import LabelMap, IntensityMap, LevelSegmentation, ResidualMap
from app.models.objects import ObjectRecord, RelationKind, Relation, ObjectList

__all__ = [
    "ImageGrid", "Neighborhood3x3", "Pyramid",
    "StatusMap", "InfoMaps", "CumulativeHistogram", "Tier", "TierMap", "EdgeMark", "EdgeMap",
    "LabelMap", "IntensityMap", "LevelSegmentation", "ResidualMap",
    "ObjectRecord", "RelationKind", "Relation", "ObjectList",
]
