"""Classifiers, class-imbalance handling, splitting, CV tuning and F1 reporting."""

from electwit.ml.models import (
    DEFAULT_GRIDS,
    KINDS,
    ModelSpec,
    build_model,
    default_grid,
    predict,
    train,
)
from electwit.ml.persist import load_model, save_model
from electwit.ml.pipeline import (
    DEFAULT_FEATURE_SETS,
    FEATURE_FAMILIES,
    Dataset,
    ModelReport,
    ReportRow,
    cross_validate_grid,
    f1_score,
    oversample_indices,
    random_oversample,
    run_benchmark,
    stratified_kfold_indices,
    stratified_split,
    stratified_split_indices,
)

__all__ = [
    "DEFAULT_FEATURE_SETS",
    "DEFAULT_GRIDS",
    "Dataset",
    "FEATURE_FAMILIES",
    "KINDS",
    "ModelReport",
    "ModelSpec",
    "ReportRow",
    "build_model",
    "cross_validate_grid",
    "default_grid",
    "f1_score",
    "load_model",
    "oversample_indices",
    "predict",
    "random_oversample",
    "run_benchmark",
    "save_model",
    "stratified_kfold_indices",
    "stratified_split",
    "stratified_split_indices",
    "train",
]
