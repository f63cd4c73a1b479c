"""
Per-invocation dependencies: the validated run configuration and input grids.
"""
import argparse
import logging
from pathlib import Path
from typing import List
from pydantic import ValidationError
from app.exceptions import UsageError
from app.models.grid import ImageGrid
from app.schemas import RunConfig
from app.utils.pgm import read_pgm

logger = logging.getLogger(__name__)

# argparse destination -> RunConfig field
_FLAG_FIELDS = {
    "top_size": "top_target",
    "delta_sim": "similarity_delta",
    "delta_refine": "refine_delta",
    "seed_min": "seed_min_size",
    "bins": "bin_count",
    "fractions": "fractions",
    "out": "output_dir",
    "rescale": "rescale",
}


def parse_fractions(text: str) -> List[float]:
    """Parse ``a,b,c`` into floats."""
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"invalid --fractions value {text!r}")


def get_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Build the run configuration from parsed flags.
    
    Flags left unset fall back to the settings defaults.
    
    Raises:
        UsageError: If any value fails validation
    """
    values = {}
    for dest, field in _FLAG_FIELDS.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        if field == "fractions":
            value = parse_fractions(value)
        values[field] = value
    
    try:
        config = RunConfig(**values)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in exc.errors()
        )
        raise UsageError(f"invalid configuration: {problems}")
    
    logger.debug("run config: %s", config.model_dump_json())
    return config


def load_grid(path: Path) -> ImageGrid:
    """Read the input image."""
    grid = read_pgm(path)
    logger.info("read %s: %dx%d", path, grid.width, grid.height)
    return grid


def prepare_output(config: RunConfig) -> Path:
    """Create the output directory if needed."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    return config.output_dir
