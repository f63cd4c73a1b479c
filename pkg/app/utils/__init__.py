"""Utils package."""
from app.utils.pgm import read_pgm, write_pgm, quantize
from app.utils.export import (
    write_gray_map, write_label_map, write_tier_map, write_edge_map, write_status_map,
    write_residual_map, read_residual_map, write_histogram_csv, write_json,
)

__all__ = [
    "read_pgm",
    "write_pgm",
    "quantize",
    "write_gray_map",
    "write_label_map",
    "write_tier_map",
    "write_edge_map",
    "write_status_map",
    "write_residual_map",
    "read_residual_map",
    "write_histogram_csv",
    "write_json",
]
