"""
Pytest configuration and fixtures.
"""
import numpy as np
import pytest
from app.models.grid import ImageGrid
from app.utils.pgm import write_pgm


def step_values(width: int = 64, height: int = 64, at: int = 32, low: int = 64, high: int = 192) -> np.ndarray:
    """Vertical step: columns left of ``at`` are ``low``, the rest ``high``."""
    values = np.full((height, width), float(high))
    values[:, :at] = low
    return values


def quadrant_values(size: int = 12, levels=(0, 80, 160, 240)) -> np.ndarray:
    half = size // 2
    values = np.empty((size, size))
    values[:half, :half] = levels[0]
    values[:half, half:] = levels[1]
    values[half:, :half] = levels[2]
    values[half:, half:] = levels[3]
    return values


def fractal_noise(rng: np.random.Generator, size: int = 32, octaves: int = 4) -> np.ndarray:
    """Integer gray levels from summed nearest-neighbor upsampled noise."""
    values = np.zeros((size, size))
    for octave in range(octaves):
        cells = max(size >> (octaves - 1 - octave), 1)
        coarse = rng.uniform(0, 1, (cells, cells))
        repeat = size // cells
        values += np.kron(coarse, np.ones((repeat, repeat))) / (octave + 1)
    values = 255 * (values - values.min()) / (values.max() - values.min())
    return np.floor(values)


@pytest.fixture
def rng():
    """Seeded generator, so randomized tests are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def step_grid():
    return ImageGrid(step_values())


@pytest.fixture
def quadrant_grid():
    return ImageGrid(quadrant_values())


@pytest.fixture
def step_pgm(tmp_path):
    """64x64 two-region step image on disk."""
    return write_pgm(step_values(), tmp_path / "two_step.pgm")


@pytest.fixture
def const_pgm(tmp_path):
    return write_pgm(np.full((16, 16), 77, dtype=np.int64), tmp_path / "const.pgm")


@pytest.fixture
def noise_pgm(tmp_path, rng):
    """32x32 textured image on disk."""
    return write_pgm(fractal_noise(rng).astype(np.int64), tmp_path / "noise.pgm")
