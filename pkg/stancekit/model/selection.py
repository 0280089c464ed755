"""Rank features by correlation or gain ratio and keep the top k."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray
from sklearn.feature_extraction import DictVectorizer

from stancekit.exceptions import InsufficientDataError
from stancekit.types import LABEL_ORDER, FeatureVector, StanceLabel

if TYPE_CHECKING:
    from scipy.sparse import csc_matrix

logger = logging.getLogger(__name__)

LabeledVector = tuple[FeatureVector, StanceLabel]

DEFAULT_K = 2000


class SelectionMethod(str, Enum):
    """How features are ranked before training."""

    NONE = "none"
    CORRELATION = "correlation"
    GAIN_RATIO = "gainratio"


@dataclass(frozen=True)
class SelectionReport:
    """Ranked features, best first, and how many to keep."""

    method: SelectionMethod
    ranked: tuple[tuple[str, float], ...]
    k: int

    def __post_init__(self) -> None:
        if self.k > len(self.ranked):
            raise ValueError(f"k={self.k} exceeds vocabulary size {len(self.ranked)}")

    @property
    def selected(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.ranked[: self.k])


def _matrices(
    examples: Sequence[LabeledVector],
) -> tuple[list[str], csc_matrix, NDArray[np.float64]]:
    if len(examples) < 2:
        raise InsufficientDataError("feature ranking needs at least 2 examples")
    present = [label for label in LABEL_ORDER if any(lab == label for _, lab in examples)]
    if len(present) < 2:
        raise InsufficientDataError("feature ranking needs at least 2 classes")
    vectorizer = DictVectorizer(sort=True)
    matrix = vectorizer.fit_transform([fv for fv, _ in examples]).tocsc()
    indicators = np.array(
        [[1.0 if lab == label else 0.0 for label in present] for _, lab in examples]
    )
    return list(vectorizer.get_feature_names_out()), matrix, indicators


def _rank(names: list[str], scores: NDArray[np.float64]) -> tuple[tuple[str, float], ...]:
    pairs = [(name, float(s)) for name, s in zip(names, scores, strict=True)]
    return tuple(sorted(pairs, key=lambda pair: (-pair[1], pair[0])))


def _resolve_k(k: int | None, size: int) -> int:
    if k is None:
        return min(DEFAULT_K, size)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return min(k, size)


def rank_by_correlation(examples: Sequence[LabeledVector], k: int | None = None) -> SelectionReport:
    """Score each feature by the largest |Pearson r| against a one-vs-rest class indicator.

    Features or classes with zero variance score 0.
    """
    names, matrix, indicators = _matrices(examples)
    n = float(len(examples))
    sum_x = np.asarray(matrix.sum(axis=0)).ravel()
    sum_xx = np.asarray(matrix.multiply(matrix).sum(axis=0)).ravel()
    sum_xy = np.asarray(matrix.T @ indicators)
    sum_y = indicators.sum(axis=0)

    var_x = n * sum_xx - sum_x**2
    var_y = n * sum_y - sum_y**2
    var_x[var_x <= 1e-12 * np.maximum(1.0, n * sum_xx)] = 0.0
    covariance = n * sum_xy - np.outer(sum_x, sum_y)
    denominator = np.sqrt(np.outer(var_x, var_y))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(denominator > 0, covariance / denominator, 0.0)
    scores = np.minimum(np.abs(r).max(axis=1), 1.0) if names else np.zeros(0)

    report = SelectionReport(
        SelectionMethod.CORRELATION, _rank(names, scores), _resolve_k(k, len(names))
    )
    logger.debug("ranked %d features by correlation", len(names))
    return report


def _entropy(counts: NDArray[np.float64]) -> NDArray[np.float64]:
    """Entropy in bits of each row of non-negative counts; empty rows give 0."""
    totals = counts.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / totals, 0.0)
        terms = np.where(p > 0, p * np.log2(p), 0.0)
    return -terms.sum(axis=-1)


def rank_by_gain_ratio(examples: Sequence[LabeledVector], k: int | None = None) -> SelectionReport:
    """Score each feature by information gain over intrinsic value on binarized presence."""
    names, matrix, indicators = _matrices(examples)
    n = float(len(examples))
    presence = (matrix > 0).astype(np.float64)
    class_totals = indicators.sum(axis=0)

    with_feature = np.asarray(presence.T @ indicators)
    without_feature = class_totals[np.newaxis, :] - with_feature
    n_with = with_feature.sum(axis=1)
    n_without = n - n_with

    present_part = (n_with / n) * _entropy(with_feature)
    absent_part = (n_without / n) * _entropy(without_feature)
    conditional = present_part + absent_part
    gain = np.maximum(_entropy(class_totals) - conditional, 0.0)
    intrinsic = _entropy(np.column_stack([n_with, n_without])) if names else np.zeros(0)
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = np.where(intrinsic > 0, gain / intrinsic, 0.0)

    report = SelectionReport(
        SelectionMethod.GAIN_RATIO, _rank(names, scores), _resolve_k(k, len(names))
    )
    logger.debug("ranked %d features by gain ratio", len(names))
    return report


def rank_features(
    examples: Sequence[LabeledVector], method: SelectionMethod, k: int | None = None
) -> SelectionReport | None:
    """Dispatch on ``method``; ``none`` returns ``None``."""
    if method is SelectionMethod.CORRELATION:
        return rank_by_correlation(examples, k)
    if method is SelectionMethod.GAIN_RATIO:
        return rank_by_gain_ratio(examples, k)
    return None


def restrict(vector: FeatureVector, keep: frozenset[str]) -> FeatureVector:
    return {name: value for name, value in vector.items() if name in keep}


def select_features(
    examples: Sequence[LabeledVector], report: SelectionReport, k: int | None = None
) -> list[LabeledVector]:
    """Keep only the top-k ranked features in every vector.

    Raises:
        ValueError: ``k`` is smaller than 1.
    """
    if k is not None:
        report = SelectionReport(report.method, report.ranked, _resolve_k(k, len(report.ranked)))
    keep = report.selected
    return [(restrict(fv, keep), label) for fv, label in examples]
