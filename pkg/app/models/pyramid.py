"""
Multi-stage image pyramid model.
"""
from dataclasses import dataclass
from typing import List, Tuple
from app.exceptions import GridError
from app.models.grid import ImageGrid


@dataclass(frozen=True)
class Pyramid:
    """Level 0 is the input; level L+1 is the Reduce of level L."""
    
    levels: Tuple[ImageGrid, ...]
    top_target: int
    
    def __post_init__(self):
        if not self.levels:
            raise GridError("a pyramid has at least one level")
        object.__setattr__(self, "levels", tuple(self.levels))
    
    def __len__(self) -> int:
        return len(self.levels)
    
    def __getitem__(self, level: int) -> ImageGrid:
        return self.levels[level]
    
    @property
    def top_level(self) -> int:
        return len(self.levels) - 1
    
    @property
    def top(self) -> ImageGrid:
        return self.levels[-1]
    
    @property
    def dims(self) -> List[Tuple[int, int]]:
        """(width, height) per level, level 0 first."""
        return [(grid.width, grid.height) for grid in self.levels]
    
    def __repr__(self):
        sizes = ", ".join(f"{w}x{h}" for w, h in self.dims)
        return f"<Pyramid [{sizes}]>"
