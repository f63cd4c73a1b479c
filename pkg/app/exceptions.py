"""
Error hierarchy for the analysis pipeline.

Every error carries a human-readable ``detail`` and the process exit code the
command line reports for it.
"""
from typing import Optional


class ImageInfoError(Exception):
    """Base class for all pipeline errors."""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class GridError(ImageInfoError, ValueError):
    """Raster construction failed (bad dimensions or non-finite samples)."""

    def __init__(self, detail: str, index: Optional[int] = None):
        super().__init__(detail)
        self.index = index


class OutOfBoundsError(ImageInfoError, IndexError):
    """A coordinate lies outside the grid."""


class DimensionMismatchError(ImageInfoError, ValueError):
    """Two rasters that must agree in size do not."""


class NoInformationContentError(ImageInfoError):
    """The I_loc map is all zero, so no histogram axis exists."""

    def __init__(self, detail: str = "no information content"):
        super().__init__(detail)


class ThresholdError(ImageInfoError, ValueError):
    """Invalid fraction or threshold ordering."""


class PgmError(ImageInfoError):
    """Malformed PGM file."""

    def __init__(self, detail: str, offset: int):
        super().__init__(f"{detail} (byte offset {offset})")
        self.offset = offset


class UsageError(ImageInfoError):
    """Invalid run configuration supplied on the command line."""

    exit_code = 2
