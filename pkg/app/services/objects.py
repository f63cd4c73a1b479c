"""
Object appearance list: per-level region descriptors, their hierarchical
and lateral relations, and cumulative object counts.
"""
import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
from scipy import ndimage
from app.models.objects import ObjectList, ObjectRecord, Relation, RelationKind
from app.models.pyramid import Pyramid
from app.models.segmentation import LevelSegmentation
from app.schemas import LevelSummary, ObjectListOut, RunSummary
from app.services.pyramid import expand_array

logger = logging.getLogger(__name__)


def _majority_parents(labels: np.ndarray, parent_labels: np.ndarray) -> Dict[int, int]:
    """Parent-level label covering most of each label's pixels; ties go low."""
    height, width = labels.shape
    mapped = expand_array(parent_labels, width, height)
    pairs, counts = np.unique(
        np.stack([labels.ravel(), mapped.ravel()], axis=1), axis=0, return_counts=True
    )
    best: Dict[int, Tuple[int, int]] = {}
    for (label, parent), count in zip(pairs.tolist(), counts.tolist()):
        # pairs are sorted by parent within a label, so ">" keeps the lowest on ties
        if label not in best or count > best[label][1]:
            best[label] = (parent, count)
    return {label: parent for label, (parent, _) in best.items()}


def _adjacency(labels: np.ndarray) -> Tuple[Tuple[int, int], ...]:
    """Label pairs ``(a, b)``, ``a < b``, sharing at least one 4-neighbor edge."""
    pairs = []
    for a, b in ((labels[:, :-1], labels[:, 1:]), (labels[:-1, :], labels[1:, :])):
        differ = a != b
        pairs.append(np.stack([np.minimum(a, b)[differ], np.maximum(a, b)[differ]], axis=1))
    stacked = np.concatenate(pairs)
    if stacked.size == 0:
        return ()
    return tuple(tuple(p) for p in np.unique(stacked, axis=0).tolist())


def _hierarchy_relations(hierarchy: Dict[int, int]) -> List[Relation]:
    relations = []
    for child, parent in hierarchy.items():
        link = Relation(child, RelationKind.SUB_PART_OF, parent)
        relations.extend([link, link.inverse()])
    return relations


def extract_objects(
    seg: LevelSegmentation,
    parent_seg: Optional[LevelSegmentation] = None,
    previous: Optional[ObjectList] = None,
) -> ObjectList:
    """
    One record per label of ``seg``.
    
    Args:
        seg: Segmentation of the current level
        parent_seg: Segmentation of the level above, if any
        previous: Object list of the level above; supplies first-seen levels
            and the hierarchy carried down
            
    Returns:
        ObjectList: records plus hierarchical (sub_part_of/contains) relations
    """
    labels = seg.labels
    flat = labels.ravel()
    ys, xs = np.indices(labels.shape)
    
    counts = np.bincount(flat)
    sum_x = np.bincount(flat, weights=xs.ravel())
    sum_y = np.bincount(flat, weights=ys.ravel())
    boxes = ndimage.find_objects(labels)
    present, first = np.unique(flat, return_index=True)
    intensity = seg.intensity_map.values.ravel()[first]
    
    parents = _majority_parents(labels, parent_seg.labels) if parent_seg is not None else {}
    inherited = set(np.unique(parent_seg.labels).tolist()) if parent_seg is not None else set()
    seen_before = previous.records if previous is not None else {}
    
    records = {}
    for label, mean in zip(present.tolist(), intensity.tolist()):
        rows, cols = boxes[label - 1]
        size = int(counts[label])
        records[label] = ObjectRecord(
            label=label,
            level_first_seen=seen_before[label].level_first_seen if label in seen_before else seg.level,
            size_px=size,
            centroid=(float(sum_x[label] / size), float(sum_y[label] / size)),
            mean_intensity=float(mean),
            bbox=(cols.start, rows.start, cols.stop - 1, rows.stop - 1),
            parent_label=parents.get(label),
        )
    
    hierarchy = {}
    if previous is not None:
        hierarchy = {
            child: parent for child, parent in previous.hierarchy.items()
            if child in records and parent in records
        }
    for label, parent in parents.items():
        if label not in inherited and parent != label:
            hierarchy[label] = parent
    
    return ObjectList(
        level=seg.level,
        records=records,
        relations=tuple(sorted(_hierarchy_relations(hierarchy))),
        hierarchy=hierarchy,
        adjacency=_adjacency(labels),
    )


def relate_objects(objects: ObjectList) -> ObjectList:
    """
    Add lateral relations between boundary-adjacent objects.
    
    The dominant axis of the centroid offset decides between left_of/right_of
    and above/below; coincident centroids get no lateral relation.
    """
    relations = _hierarchy_relations(objects.hierarchy)
    for a, b in objects.adjacency:
        ax, ay = objects.records[a].centroid
        bx, by = objects.records[b].centroid
        dx, dy = bx - ax, by - ay
        if abs(dx) > abs(dy):
            first, second = (a, b) if dx > 0 else (b, a)
            link = Relation(first, RelationKind.LEFT_OF, second)
        elif dy != 0:
            first, second = (a, b) if dy > 0 else (b, a)
            link = Relation(first, RelationKind.ABOVE, second)
        else:
            continue
        relations.extend([link, link.inverse()])
    return replace(objects, relations=tuple(sorted(set(relations))))


def accumulate(lists: Sequence[ObjectList]) -> List[int]:
    """Cumulative count of distinct labels, top level first."""
    seen = set()
    counts = []
    for objects in lists:
        seen.update(objects.records)
        counts.append(len(seen))
    return counts


def build_object_lists(segmentations: Sequence[LevelSegmentation]) -> List[ObjectList]:
    """Object lists for a full top-down run, top level first."""
    lists: List[ObjectList] = []
    parent_seg = None
    for seg in segmentations:
        previous = lists[-1] if lists else None
        lists.append(relate_objects(extract_objects(seg, parent_seg, previous)))
        parent_seg = seg
    
    counts = accumulate(lists)
    lists = [replace(objects, cumulative_count=count) for objects, count in zip(lists, counts)]
    logger.info("cumulative object counts: %s", counts)
    return lists


def render_objects(labels: np.ndarray, objects: ObjectList) -> np.ndarray:
    """Paint every label with its recorded mean intensity."""
    lookup = np.zeros(labels.max() + 1)
    for label, record in objects.records.items():
        lookup[label] = record.mean_intensity
    return lookup[labels]


def describe_run(
    pyramid: Pyramid,
    segmentations: Sequence[LevelSegmentation],
    lists: Sequence[ObjectList],
) -> RunSummary:
    """Per-level object counts, description size and reconstruction error."""
    levels = []
    for seg, objects in zip(segmentations, lists):
        rendered = render_objects(seg.labels, objects)
        error = rendered - pyramid[seg.level].values
        levels.append(LevelSummary(
            level=seg.level,
            width=seg.width,
            height=seg.height,
            object_count=len(objects),
            cumulative_count=objects.cumulative_count,
            description_bytes=len(ObjectListOut.from_object_list(objects).model_dump_json()),
            reconstruction_rmse=float(np.sqrt(np.mean(error ** 2))),
        ))
    return RunSummary(
        top_target=pyramid.top_target,
        levels=levels,
        total_description_bytes=sum(level.description_bytes for level in levels),
    )
