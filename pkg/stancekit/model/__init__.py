"""Classifier and feature selection."""

from stancekit.model.naive_bayes import (
    NbModel,
    load_model,
    predict,
    predict_all,
    predict_proba,
    save_model,
    train_nb,
)
from stancekit.model.selection import (
    SelectionMethod,
    SelectionReport,
    rank_by_correlation,
    rank_by_gain_ratio,
    rank_features,
    select_features,
)

__all__ = [
    "NbModel",
    "train_nb",
    "predict",
    "predict_all",
    "predict_proba",
    "save_model",
    "load_model",
    "SelectionMethod",
    "SelectionReport",
    "rank_by_correlation",
    "rank_by_gain_ratio",
    "rank_features",
    "select_features",
]
