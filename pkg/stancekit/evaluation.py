"""Stance metric, ablation, learning curves and dev-set sweeps."""

from __future__ import annotations

import csv
import logging
import random
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

from stancekit.exceptions import ConfigError, CorpusFormatError, InsufficientDataError
from stancekit.features import FeatureConfig, FeatureFamily, featurize_all
from stancekit.features.store import UNLABELED
from stancekit.model import (
    NbModel,
    SelectionMethod,
    SelectionReport,
    predict_all,
    rank_features,
    select_features,
    train_nb,
)
from stancekit.resources import FeatureResources
from stancekit.types import LABEL_ORDER, FeatureVector, ParsedTweet, StanceLabel

logger = logging.getLogger(__name__)

REPORT_COLUMNS = (
    "topic",
    "config_name",
    "favor_f",
    "against_f",
    "none_f",
    "semeval_avg",
    "train_size",
    "seed",
    "strip_hashtags",
)


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    """Per-class scores and the gold-by-predicted confusion matrix (rows are gold)."""

    per_class: dict[StanceLabel, ClassScores]
    confusion: tuple[tuple[int, ...], ...]

    def f1(self, label: StanceLabel) -> float:
        return self.per_class[label].f1

    @property
    def semeval_avg(self) -> float:
        """Mean of the FAVOR and AGAINST F1; NONE is scored but not averaged."""
        return (self.f1(StanceLabel.FAVOR) + self.f1(StanceLabel.AGAINST)) / 2


def evaluate(predictions: Sequence[StanceLabel], gold: Sequence[StanceLabel]) -> EvalReport:
    """Score predictions against gold labels over the full set, NONE included.

    Raises:
        ValueError: The sequences differ in length or are empty.
    """
    if len(predictions) != len(gold):
        raise ValueError(f"{len(predictions)} predictions for {len(gold)} gold labels")
    if not gold:
        raise ValueError("cannot evaluate an empty set")

    labels = [label.value for label in LABEL_ORDER]
    y_true = [StanceLabel(g).value for g in gold]
    y_pred = [StanceLabel(p).value for p in predictions]
    precision, recall, f1, support = precision_recall_fscore_support(
        y_true, y_pred, labels=labels, zero_division=0
    )
    matrix = confusion_matrix(y_true, y_pred, labels=labels)
    return EvalReport(
        per_class={
            label: ClassScores(
                float(precision[i]), float(recall[i]), float(f1[i]), int(support[i])
            )
            for i, label in enumerate(LABEL_ORDER)
        },
        confusion=tuple(tuple(int(cell) for cell in row) for row in matrix),
    )


@dataclass(frozen=True)
class ModelSpec:
    """Everything needed to train one classifier besides the data.

    Attributes:
        name: Label used in reports.
        features: Feature families and options.
        selection: Feature ranking method.
        k: Features kept after ranking; ``None`` means the ranker default.
        alpha: NB smoothing constant.
    """

    name: str
    features: FeatureConfig
    selection: SelectionMethod = SelectionMethod.NONE
    k: int | None = None
    alpha: float = 1.0

    def with_families(self, name: str, families: Iterable[FeatureFamily]) -> ModelSpec:
        return replace(self, name=name, features=self.features.with_families(families))

    def with_strip_hashtags(self, strip: bool) -> ModelSpec:
        return replace(self, features=replace(self.features, strip_hashtags=strip))


@dataclass(frozen=True)
class FittedModel:
    """A trained classifier plus the ranking that chose its vocabulary."""

    spec: ModelSpec
    model: NbModel
    selection: SelectionReport | None = None


def gold_labels(corpus: Sequence[ParsedTweet]) -> list[StanceLabel]:
    """Gold stance of every tweet.

    Raises:
        InsufficientDataError: A tweet has no gold stance.
    """
    labels = []
    for item in corpus:
        if item.tweet.gold_stance is None:
            raise InsufficientDataError(f"tweet {item.tweet.id} has no gold stance")
        labels.append(item.tweet.gold_stance)
    return labels


def fit_vectors(
    vectors: Sequence[FeatureVector], labels: Sequence[StanceLabel], spec: ModelSpec
) -> FittedModel:
    """Rank and select features if requested, then train NB."""
    examples = list(zip(vectors, labels, strict=True))
    report = rank_features(examples, spec.selection, spec.k)
    if report is not None:
        examples = select_features(examples, report)
    return FittedModel(spec=spec, model=train_nb(examples, spec.alpha), selection=report)


def fit(
    train: Sequence[ParsedTweet],
    spec: ModelSpec,
    resources: FeatureResources,
    threads: int = 1,
) -> FittedModel:
    """Featurize ``train`` with ``spec`` and fit a classifier."""
    vectors = featurize_all(train, spec.features, resources, threads)
    return fit_vectors(vectors, gold_labels(train), spec)


def train_and_evaluate(
    train: Sequence[ParsedTweet],
    test: Sequence[ParsedTweet],
    spec: ModelSpec,
    resources: FeatureResources,
    threads: int = 1,
) -> EvalReport:
    """One full train and test cycle under identical preprocessing."""
    fitted = fit(train, spec, resources, threads)
    test_vectors = featurize_all(test, spec.features, resources, threads)
    report = evaluate(predict_all(fitted.model, test_vectors), gold_labels(test))
    logger.info("%s: semeval_avg=%.4f", spec.name, report.semeval_avg)
    return report


@dataclass(frozen=True)
class AblationRow:
    name: str
    report: EvalReport


def run_ablation(
    train: Sequence[ParsedTweet],
    test: Sequence[ParsedTweet],
    base: ModelSpec,
    subsets: Sequence[tuple[str, frozenset[FeatureFamily]]],
    resources: FeatureResources,
    threads: int = 1,
) -> list[AblationRow]:
    """Train and evaluate one model per family subset; rows keep input order.

    Every cell shares ``base``'s selection, alpha and hashtag handling.
    """
    specs = [base.with_families(name, families) for name, families in subsets]

    def cell(spec: ModelSpec) -> AblationRow:
        return AblationRow(spec.name, train_and_evaluate(train, test, spec, resources))

    if threads <= 1 or len(specs) < 2:
        return [cell(spec) for spec in specs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(cell, specs))


@dataclass(frozen=True)
class CurvePoint:
    """Scores of every configuration at one training-set size."""

    train_size: int
    seed: int
    reports: dict[str, EvalReport] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.train_size <= 0:
            raise ValueError(f"train_size must be positive, got {self.train_size}")

    @property
    def semeval_avg(self) -> dict[str, float]:
        return {name: report.semeval_avg for name, report in self.reports.items()}


def nested_order(size: int, seed: int) -> list[int]:
    """A seeded permutation of ``range(size)``; prefixes give nested samples."""
    order = list(range(size))
    random.Random(seed).shuffle(order)
    return order


def learning_curve(
    train: Sequence[ParsedTweet],
    test: Sequence[ParsedTweet],
    specs: Sequence[ModelSpec],
    sizes: Sequence[int],
    seed: int,
    resources: FeatureResources,
    threads: int = 1,
) -> list[CurvePoint]:
    """Evaluate every spec on nested random subsamples of ``train``.

    Each spec is featurized once; the sample for size ``s`` is the first ``s``
    tweets of one seeded permutation, so smaller samples are subsets of larger ones.

    Raises:
        ConfigError: ``sizes`` is empty, non-positive or not strictly increasing.
        InsufficientDataError: The largest size exceeds the training set.
    """
    if not sizes or sizes[0] <= 0 or any(a >= b for a, b in zip(sizes, sizes[1:])):
        raise ConfigError(f"sizes must be positive and strictly increasing, got {list(sizes)}")
    if sizes[-1] > len(train):
        raise InsufficientDataError(
            f"curve size {sizes[-1]} exceeds the {len(train)} training tweets"
        )

    order = nested_order(len(train), seed)
    train_gold = gold_labels(train)
    test_gold = gold_labels(test)

    def curve_for(spec: ModelSpec) -> list[EvalReport]:
        train_vectors = featurize_all(train, spec.features, resources)
        test_vectors = featurize_all(test, spec.features, resources)
        reports = []
        for size in sizes:
            sample = order[:size]
            fitted = fit_vectors(
                [train_vectors[i] for i in sample], [train_gold[i] for i in sample], spec
            )
            reports.append(evaluate(predict_all(fitted.model, test_vectors), test_gold))
            logger.debug("%s @ %d: %.4f", spec.name, size, reports[-1].semeval_avg)
        return reports

    if threads <= 1 or len(specs) < 2:
        per_spec = [curve_for(spec) for spec in specs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_spec = list(pool.map(curve_for, specs))

    return [
        CurvePoint(
            train_size=size,
            seed=seed,
            reports={spec.name: reports[i] for spec, reports in zip(specs, per_spec, strict=True)},
        )
        for i, size in enumerate(sizes)
    ]


@dataclass(frozen=True)
class SweepResult:
    """Dev-set scores per candidate and the winner."""

    rows: list[AblationRow]
    best: str


# (name suffix, use_stemmed, use_unstemmed)
_STEMMING = (("", False, True), ("+stem", True, False), ("+both", True, True))


def stemming_variants(spec: ModelSpec) -> list[ModelSpec]:
    """The unstemmed, stemmed and combined n-gram variants of ``spec``."""
    variants = []
    for suffix, stemmed, unstemmed in _STEMMING:
        features = replace(spec.features, use_stemmed=stemmed, use_unstemmed=unstemmed)
        variants.append(replace(spec, name=f"{spec.name}{suffix}", features=features))
    return variants


def run_sweep(
    train: Sequence[ParsedTweet],
    dev: Sequence[ParsedTweet],
    candidates: Sequence[ModelSpec],
    resources: FeatureResources,
    threads: int = 1,
) -> SweepResult:
    """Score every candidate on ``dev`` and name the best by semeval_avg.

    Ties go to the earlier candidate.
    """
    if not candidates:
        raise ValueError("sweep needs at least one candidate")
    names = [spec.name for spec in candidates]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise ValueError(f"duplicate candidate names: {', '.join(duplicates)}")

    def cell(spec: ModelSpec) -> AblationRow:
        return AblationRow(spec.name, train_and_evaluate(train, dev, spec, resources))

    if threads <= 1 or len(candidates) < 2:
        rows = [cell(spec) for spec in candidates]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(cell, candidates))

    best = rows[0]
    for row in rows[1:]:
        if row.report.semeval_avg > best.report.semeval_avg:
            best = row
    logger.info("sweep: best of %d candidates is %s", len(rows), best.name)
    return SweepResult(rows=rows, best=best.name)


@dataclass(frozen=True)
class ReportRow:
    """One line of a report CSV."""

    topic: str
    config_name: str
    report: EvalReport
    train_size: int
    seed: int
    strip_hashtags: bool

    def as_record(self) -> list[str]:
        return [
            self.topic,
            self.config_name,
            _score(self.report.f1(StanceLabel.FAVOR)),
            _score(self.report.f1(StanceLabel.AGAINST)),
            _score(self.report.f1(StanceLabel.NONE)),
            _score(self.report.semeval_avg),
            str(self.train_size),
            str(self.seed),
            "true" if self.strip_hashtags else "false",
        ]


def _score(value: float) -> str:
    return f"{value:.6f}"


def write_report_csv(rows: Iterable[ReportRow], path: str | Path) -> None:
    """Write report rows with a header, in the order given."""
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow(row.as_record())


def curve_rows(
    topic: str, points: Sequence[CurvePoint], strip_hashtags: bool
) -> list[ReportRow]:
    """Flatten curve points to one row per configuration and size."""
    return [
        ReportRow(topic, name, report, point.train_size, point.seed, strip_hashtags)
        for point in points
        for name, report in point.reports.items()
    ]


def write_curve_csv(
    topic: str, points: Sequence[CurvePoint], strip_hashtags: bool, path: str | Path
) -> None:
    write_report_csv(curve_rows(topic, points, strip_hashtags), path)


PredictionRow = tuple[str, StanceLabel, StanceLabel | None]


def save_predictions(rows: Iterable[PredictionRow], path: str | Path) -> None:
    """Write ``tweet_id<TAB>predicted<TAB>gold`` lines; unknown gold is ``_``."""
    with Path(path).open("w", encoding="utf-8") as handle:
        for tweet_id, predicted, gold in rows:
            handle.write(f"{tweet_id}\t{predicted.value}\t{gold.value if gold else UNLABELED}\n")


def load_predictions(path: str | Path) -> list[PredictionRow]:
    """Read a file written by :func:`save_predictions`."""
    rows: list[PredictionRow] = []
    with Path(path).open(encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            columns = line.split("\t")
            if len(columns) != 3:
                raise CorpusFormatError("expected 3 tab-separated columns", path=path, line=number)
            tweet_id, predicted, gold = columns
            try:
                rows.append(
                    (
                        tweet_id,
                        StanceLabel(predicted),
                        None if gold == UNLABELED else StanceLabel(gold),
                    )
                )
            except ValueError as e:
                raise CorpusFormatError(str(e), path=path, line=number) from e
    return rows
