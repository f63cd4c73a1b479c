"""
Run configuration defaults for the image information content engine.
"""
from typing import List
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    """Pipeline defaults, overridable from ``.env`` or ``IMGINFO_*`` variables."""
    
    # App
    APP_NAME: str = "imginfo"
    LOG_LEVEL: str = "WARNING"
    
    # Pyramid
    TOP_TARGET: int = 12  # pixels, minimum dimension of the top level
    
    # Segmentation
    SIMILARITY_DELTA: float = 16.0  # gray levels, top-level region growing
    REFINE_DELTA: float = 16.0  # gray levels, top-down deviation test
    SEED_MIN_SIZE: int = 4  # pixels, smallest newly emerging object
    
    # Low-level information content
    BIN_COUNT: int = 100
    FRACTIONS: List[float] = [0.50, 0.70, 0.85]
    
    # Output
    OUTPUT_DIR: str = "out"
    
    class Config:
        env_file = ".env"
        env_prefix = "IMGINFO_"
        case_sensitive = True


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
