"""Water-quality relevance classification pipeline."""

from ._aquasift import (
    AlignmentError,
    AquasiftError,
    ArgumentError,
    BalancingError,
    ConfigError,
    StageError,
    clean,
    compare,
    confusion,
    count_classes,
    decide,
    f1_score,
    fuse,
    generate_synthetic,
    merit_weights,
    report,
    run,
    split,
    upsample,
)

__all__ = [
    "AlignmentError",
    "AquasiftError",
    "ArgumentError",
    "BalancingError",
    "ConfigError",
    "StageError",
    "clean",
    "compare",
    "confusion",
    "count_classes",
    "decide",
    "f1_score",
    "fuse",
    "generate_synthetic",
    "merit_weights",
    "report",
    "run",
    "split",
    "upsample",
]
