"""Multinomial Naive Bayes over sparse feature vectors."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from sklearn.feature_extraction import DictVectorizer
from sklearn.naive_bayes import MultinomialNB

from stancekit.exceptions import InsufficientDataError, ModelFormatError
from stancekit.types import LABEL_ORDER, FeatureVector, StanceLabel

logger = logging.getLogger(__name__)

LabeledVector = tuple[FeatureVector, StanceLabel]

_MAGIC = "# stancekit multinomial-nb"


@dataclass(eq=False)
class NbModel:
    """Trained Multinomial NB parameters.

    Attributes:
        classes: Class labels in tie-break order.
        log_prior: ln P(c), aligned with ``classes``.
        vocabulary: Feature names, aligned with the likelihood columns.
        log_likelihood: ln P(f | c), shape (classes, vocabulary).
        alpha: Additive smoothing constant.
    """

    classes: tuple[StanceLabel, ...]
    log_prior: NDArray[np.float64]
    vocabulary: tuple[str, ...]
    log_likelihood: NDArray[np.float64]
    alpha: float
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._index = {name: i for i, name in enumerate(self.vocabulary)}
        if self.log_likelihood.shape != (len(self.classes), len(self.vocabulary)):
            raise ValueError(
                f"likelihood shape {self.log_likelihood.shape} does not match "
                f"{len(self.classes)} classes x {len(self.vocabulary)} features"
            )

    def scores(self, fv: FeatureVector) -> NDArray[np.float64]:
        """Per-class log-scores; features outside the vocabulary are ignored."""
        columns = [self._index[name] for name in fv if name in self._index]
        if not columns:
            return self.log_prior.copy()
        weights = np.array([fv[self.vocabulary[c]] for c in columns])
        return self.log_prior + self.log_likelihood[:, columns] @ weights


def train_nb(
    examples: Sequence[LabeledVector],
    alpha: float = 1.0,
    classes: Sequence[StanceLabel] = LABEL_ORDER,
) -> NbModel:
    """Estimate Multinomial NB parameters.

    ``ln P(f|c) = ln((count(f, c) + alpha) / (mass(c) + alpha |V|))`` where counts are
    summed feature values, so fractional values accumulate as real counts.

    Args:
        examples: Labeled feature vectors.
        alpha: Smoothing constant, > 0.
        classes: Classes of the model, in tie-break order.

    Raises:
        ValueError: ``alpha`` is not positive.
        InsufficientDataError: A class has no example, or a label is not in ``classes``.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be greater than 0, got {alpha}")
    classes = tuple(StanceLabel(c) for c in classes)
    counts = {label: 0 for label in classes}
    for _, label in examples:
        if label not in counts:
            raise InsufficientDataError(f"label {label.value} is not one of the model classes")
        counts[label] += 1
    empty = [label.value for label, n in counts.items() if n == 0]
    if empty:
        raise InsufficientDataError(f"no training examples for class(es) {', '.join(empty)}")

    vectorizer = DictVectorizer(sort=True)
    matrix = vectorizer.fit_transform([fv for fv, _ in examples])
    targets = [label.value for _, label in examples]
    vocabulary = tuple(vectorizer.get_feature_names_out())

    if not vocabulary:
        totals = np.array([counts[label] for label in classes], dtype=np.float64)
        log_prior = np.log(totals) - np.log(totals.sum())
        log_likelihood = np.zeros((len(classes), 0))
    else:
        estimator = MultinomialNB(alpha=alpha, force_alpha=True)
        estimator.fit(matrix, targets)
        fitted = [str(c) for c in estimator.classes_]
        order = [fitted.index(label.value) for label in classes]
        log_prior = np.asarray(estimator.class_log_prior_[order], dtype=np.float64)
        log_likelihood = np.asarray(estimator.feature_log_prob_[order], dtype=np.float64)

    logger.info(
        "trained NB on %d examples, %d features (%s)",
        len(examples),
        len(vocabulary),
        ", ".join(f"{label.value}={counts[label]}" for label in classes),
    )
    return NbModel(
        classes=classes,
        log_prior=log_prior,
        vocabulary=vocabulary,
        log_likelihood=log_likelihood,
        alpha=float(alpha),
    )


def predict(model: NbModel, fv: FeatureVector) -> tuple[StanceLabel, dict[StanceLabel, float]]:
    """Return the argmax class and the per-class log-scores.

    Exact ties go to the earlier class in ``model.classes`` (FAVOR, AGAINST, NONE).
    """
    scores = model.scores(fv)
    best = int(np.argmax(scores))
    per_class = {label: float(s) for label, s in zip(model.classes, scores, strict=True)}
    return model.classes[best], per_class


def predict_proba(model: NbModel, fv: FeatureVector) -> dict[StanceLabel, float]:
    """Normalized posterior per class."""
    scores = model.scores(fv)
    posterior = np.exp(scores - np.logaddexp.reduce(scores))
    return {label: float(p) for label, p in zip(model.classes, posterior, strict=True)}


def predict_all(model: NbModel, vectors: Sequence[FeatureVector]) -> list[StanceLabel]:
    """Predict a label for each vector."""
    return [predict(model, fv)[0] for fv in vectors]


def save_model(model: NbModel, path: str | Path) -> None:
    """Write the model as TSV sections with 17 significant digits."""
    with Path(path).open("w", encoding="utf-8") as handle:
        handle.write(f"{_MAGIC}\n")
        handle.write(f"alpha\t{model.alpha:.17g}\n")
        handle.write(f"labels\t{','.join(label.value for label in model.classes)}\n")
        handle.write("[priors]\n")
        for label, value in zip(model.classes, model.log_prior, strict=True):
            handle.write(f"{label.value}\t{value:.17g}\n")
        handle.write("[likelihoods]\n")
        for row, label in enumerate(model.classes):
            for column, name in enumerate(model.vocabulary):
                handle.write(f"{label.value}\t{name}\t{model.log_likelihood[row, column]:.17g}\n")


def load_model(path: str | Path) -> NbModel:
    """Read a model written by :func:`save_model`."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != _MAGIC:
        raise ModelFormatError(f"{path}: not a stancekit model file")

    try:
        alpha_key, alpha_value = lines[1].split("\t")
        labels_key, labels_value = lines[2].split("\t")
        if (alpha_key, labels_key, lines[3]) != ("alpha", "labels", "[priors]"):
            raise ValueError("bad header")
        alpha = float(alpha_value)
        classes = tuple(StanceLabel(value) for value in labels_value.split(","))
        row_of = {label: i for i, label in enumerate(classes)}

        log_prior = np.zeros(len(classes))
        position = 4
        for _ in classes:
            label, value = lines[position].split("\t")
            log_prior[row_of[StanceLabel(label)]] = float(value)
            position += 1
        if lines[position] != "[likelihoods]":
            raise ValueError("missing [likelihoods] section")

        vocabulary: dict[str, int] = {}
        cells: list[tuple[int, int, float]] = []
        for line in lines[position + 1 :]:
            label, name, value = line.split("\t")
            column = vocabulary.setdefault(name, len(vocabulary))
            cells.append((row_of[StanceLabel(label)], column, float(value)))
    except (ValueError, IndexError, KeyError) as e:
        raise ModelFormatError(f"{path}: malformed model file ({e})") from e

    log_likelihood = np.zeros((len(classes), len(vocabulary)))
    for row, column, value in cells:
        log_likelihood[row, column] = value
    return NbModel(
        classes=classes,
        log_prior=log_prior,
        vocabulary=tuple(vocabulary),
        log_likelihood=log_likelihood,
        alpha=alpha,
    )
