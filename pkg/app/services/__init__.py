"""Services package."""
from app.services.grid import from_array, neighborhood, new_grid
from app.services.pyramid import build_pyramid, expand, level_count, reduce
from app.services.lowlevel import (
    cumulative_histogram,
    edge_map,
    local_info_map,
    prominence_mark,
    prominence_thresholds,
    status_map,
)
from app.services.segmentation import describe, refine_level, residual, segment_full, top_level_segment
from app.services.objects import build_object_lists, describe_run, extract_objects, relate_objects
from app.services.hashing import digest_file, verify_manifest, write_manifest

__all__ = [
    "from_array", "neighborhood", "new_grid",
    "build_pyramid", "expand", "level_count", "reduce",
    "cumulative_histogram", "edge_map", "local_info_map",
    "prominence_mark", "prominence_thresholds", "status_map",
    "describe", "refine_level", "residual", "segment_full", "top_level_segment",
    "build_object_lists", "describe_run", "extract_objects", "relate_objects",
    "digest_file", "verify_manifest", "write_manifest",
]
