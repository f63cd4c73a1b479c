"""Pydantic schemas for run configuration and exported documents."""
from pathlib import Path
from typing import Optional, List, Tuple
from pydantic import BaseModel, Field, field_serializer, field_validator
from app.config import settings
from app.models.objects import ObjectList, ObjectRecord, Relation, RelationKind

# decimals kept for centroids and intensities in exported documents
EXPORT_DIGITS = 6


# ==================== Run Schemas ====================
class RunConfig(BaseModel):
    """Validated configuration of one pipeline run."""
    top_target: int = Field(settings.TOP_TARGET, ge=1)
    similarity_delta: float = Field(settings.SIMILARITY_DELTA, gt=0)
    refine_delta: float = Field(settings.REFINE_DELTA, gt=0)
    seed_min_size: int = Field(settings.SEED_MIN_SIZE, ge=1)
    bin_count: int = Field(settings.BIN_COUNT, ge=2)
    fractions: List[float] = Field(default_factory=lambda: list(settings.FRACTIONS))
    output_dir: Path = Path(settings.OUTPUT_DIR)
    rescale: bool = False
    
    @field_validator("fractions")
    @classmethod
    def check_fractions(cls, value: List[float]) -> List[float]:
        """Three fractions in (0, 1), strictly increasing (t50, t70, t85 order)."""
        if len(value) != 3:
            raise ValueError(f"expected three fractions, got {len(value)}")
        if any(not 0.0 < f < 1.0 for f in value):
            raise ValueError("every fraction must lie in (0, 1)")
        if any(a >= b for a, b in zip(value, value[1:])):
            raise ValueError("fractions must be strictly increasing")
        return value


# ==================== Object List Schemas ====================
class RelationOut(BaseModel):
    kind: RelationKind
    target: int


class ObjectOut(BaseModel):
    """One object of the appearance list, fields in export order."""
    label: int
    first_seen_level: int
    size_px: int
    centroid: Tuple[float, float]
    mean_intensity: float
    bbox: Tuple[int, int, int, int]
    parent_label: Optional[int] = None
    relations: List[RelationOut] = []
    
    @field_serializer("centroid")
    def round_centroid(self, value: Tuple[float, float]) -> List[float]:
        return [round(float(v), EXPORT_DIGITS) for v in value]
    
    @field_serializer("mean_intensity")
    def round_intensity(self, value: float) -> float:
        return round(float(value), EXPORT_DIGITS)


class ObjectListOut(BaseModel):
    level: int
    cumulative_count: int
    objects: List[ObjectOut]
    
    @classmethod
    def from_object_list(cls, objects: ObjectList) -> "ObjectListOut":
        items = []
        for label in objects.labels:
            record = objects.records[label]
            items.append(ObjectOut(
                label=record.label,
                first_seen_level=record.level_first_seen,
                size_px=record.size_px,
                centroid=record.centroid,
                mean_intensity=record.mean_intensity,
                bbox=record.bbox,
                parent_label=record.parent_label,
                relations=[
                    RelationOut(kind=r.kind, target=r.target) for r in objects.relations_of(label)
                ],
            ))
        return cls(level=objects.level, cumulative_count=objects.cumulative_count, objects=items)
    
    def to_object_list(self) -> ObjectList:
        """
        Rebuild the in-memory list; hierarchy and adjacency come from the
        relations. The result equals the exported list rounded to
        ``EXPORT_DIGITS``, and exporting it again gives the same document.
        """
        records = {}
        relations = []
        for item in self.objects:
            records[item.label] = ObjectRecord(
                label=item.label,
                level_first_seen=item.first_seen_level,
                size_px=item.size_px,
                centroid=tuple(item.centroid),
                mean_intensity=item.mean_intensity,
                bbox=tuple(item.bbox),
                parent_label=item.parent_label,
            )
            relations.extend(Relation(item.label, r.kind, r.target) for r in item.relations)
        
        hierarchy = {r.subject: r.target for r in relations if r.kind == RelationKind.SUB_PART_OF}
        adjacency = sorted({
            (min(r.subject, r.target), max(r.subject, r.target))
            for r in relations
            if r.kind not in (RelationKind.SUB_PART_OF, RelationKind.CONTAINS)
        })
        return ObjectList(
            level=self.level,
            records=records,
            relations=tuple(sorted(relations)),
            cumulative_count=self.cumulative_count,
            hierarchy=hierarchy,
            adjacency=tuple(adjacency),
        )


# ==================== Summary Schemas ====================
class LevelSummary(BaseModel):
    level: int
    width: int
    height: int
    object_count: int
    cumulative_count: int
    description_bytes: int  # serialized object list size
    reconstruction_rmse: float
    
    @field_serializer("reconstruction_rmse")
    def round_rmse(self, value: float) -> float:
        return round(value, EXPORT_DIGITS)


class RunSummary(BaseModel):
    """Per-level description of a segmentation run, top level first."""
    top_target: int
    levels: List[LevelSummary]
    total_description_bytes: int


class LowLevelSummary(BaseModel):
    width: int
    height: int
    total_information: float
    mean_information: float
    bin_count: int
    bin_width: float
    fractions: List[float]
    thresholds: List[float]
    edge_threshold: float
    tier_pixels: List[int]  # tier50, tier70, tier85
    
    @field_serializer("total_information", "mean_information", "bin_width", "edge_threshold")
    def round_value(self, value: float) -> float:
        return float(f"{value:.9g}")
    
    @field_serializer("thresholds")
    def round_thresholds(self, value: List[float]) -> List[float]:
        return [float(f"{v:.9g}") for v in value]
