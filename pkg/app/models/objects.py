"""
Object appearance list models.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Optional, Tuple


@dataclass(frozen=True)
class ObjectRecord:
    """
    Descriptor of one region at one level.
    
    Centroid and bounding box are in the level's own pixel frame;
    ``bbox`` is ``(min_x, min_y, max_x, max_y)`` inclusive.
    """
    
    label: int
    level_first_seen: int
    size_px: int
    centroid: Tuple[float, float]
    mean_intensity: float
    bbox: Tuple[int, int, int, int]
    parent_label: Optional[int] = None
    
    def __repr__(self):
        return f"<ObjectRecord {self.label} size={self.size_px}>"


class RelationKind(str, Enum):
    SUB_PART_OF = "sub_part_of"
    CONTAINS = "contains"
    LEFT_OF = "left_of"
    RIGHT_OF = "right_of"
    ABOVE = "above"
    BELOW = "below"


INVERSE_KIND: Dict[RelationKind, RelationKind] = {
    RelationKind.SUB_PART_OF: RelationKind.CONTAINS,
    RelationKind.CONTAINS: RelationKind.SUB_PART_OF,
    RelationKind.LEFT_OF: RelationKind.RIGHT_OF,
    RelationKind.RIGHT_OF: RelationKind.LEFT_OF,
    RelationKind.ABOVE: RelationKind.BELOW,
    RelationKind.BELOW: RelationKind.ABOVE,
}

@dataclass(frozen=True, order=True)
class Relation:
    """``subject <kind> target``, e.g. 1 left_of 2."""
    
    subject: int
    kind: RelationKind
    target: int
    
    def inverse(self) -> "Relation":
        return Relation(self.target, INVERSE_KIND[self.kind], self.subject)


@dataclass(frozen=True)
class ObjectList:
    """
    All objects registered at one level.
    
    ``hierarchy`` maps a sub-part to the object it emerged in and is carried
    down the levels; ``adjacency`` holds label pairs ``(a, b)``, ``a < b``,
    that share a 4-connected boundary.
    """
    
    level: int
    records: Dict[int, ObjectRecord]
    relations: Tuple[Relation, ...] = ()
    cumulative_count: int = 0
    hierarchy: Dict[int, int] = field(default_factory=dict)
    adjacency: Tuple[Tuple[int, int], ...] = field(default=(), compare=False)
    
    def __len__(self) -> int:
        return len(self.records)
    
    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(sorted(self.records))
    
    def relations_of(self, label: int) -> Tuple[Relation, ...]:
        return tuple(r for r in self.relations if r.subject == label)
    
    def rounded(self, digits: int) -> "ObjectList":
        """Copy with centroids and mean intensities rounded to ``digits`` decimals."""
        records = {
            label: replace(
                record,
                centroid=tuple(round(float(v), digits) for v in record.centroid),
                mean_intensity=round(float(record.mean_intensity), digits),
            )
            for label, record in self.records.items()
        }
        return replace(self, records=records)
    
    def __repr__(self):
        return f"<ObjectList L{self.level} objects={len(self.records)} cumulative={self.cumulative_count}>"
