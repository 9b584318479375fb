"""Crop yield hindcasting from dekadal NDVI and meteorological series."""

from ._core import (
    Dataset,
    YieldcastError,
    compare,
    compute_report,
    detect_season,
    feature_matrix,
    grid_size,
    mrmr_select,
    percentile,
    percentile_rank,
    run_hindcast,
    synth,
)

__all__ = [
    "Dataset",
    "YieldcastError",
    "compare",
    "compute_report",
    "detect_season",
    "feature_matrix",
    "grid_size",
    "mrmr_select",
    "percentile",
    "percentile_rank",
    "run_hindcast",
    "synth",
]
__version__ = "0.1.0"
