"""Normalized PMI between n-grams and topics, and the PMI-pool features.

Association is measured between an n-gram (1 to 3 tokens) and a topic over
document-level presence counts with add-one smoothing::

    p(g, t) = (df(g in t) + 1) / (D + 1)
    p(g)    = (df(g) + 1) / (D + 1)
    p(t)    = (D_t + 1) / (D + 1)
    npmi    = ln(p(g, t) / (p(g) p(t))) / -ln p(g, t)

The pool is the top-N percent of the table by nPMI.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from nltk.util import everygrams

from stancekit.exceptions import InsufficientDataError, ModelFormatError
from stancekit.normalize import Normalizer, tokenize
from stancekit.types import FeatureVector, ParsedTweet

logger = logging.getLogger(__name__)

MAX_ORDER = 3
DEFAULT_MIN_DF = 2
BIN_WIDTH = 0.1

TopicDocument = tuple[str, Sequence[str]]


@dataclass(frozen=True)
class PmiModel:
    """nPMI table and top-N percent pool for one topic.

    Attributes:
        topic: Topic the association is measured against.
        table: Map from space-joined n-gram to nPMI in [-1, 1].
        pool: The top-N percent n-grams by nPMI.
        top_percent: N, in (0, 100].
    """

    topic: str
    table: dict[str, float]
    pool: frozenset[str] = field(default_factory=frozenset)
    top_percent: float = 10.0

    def __post_init__(self) -> None:
        if not 0 < self.top_percent <= 100:
            raise ValueError(f"top_percent must be in (0, 100], got {self.top_percent}")
        if not self.pool <= self.table.keys():
            raise ValueError("PMI pool contains n-grams missing from the table")


def pool_size(top_percent: float, table_size: int) -> int:
    """Number of pooled n-grams: ceil(N% of the table)."""
    return math.ceil(round(top_percent * table_size / 100, 9))


def document_ngrams(tokens: Sequence[str], max_order: int = MAX_ORDER) -> set[str]:
    """Distinct space-joined n-grams of order 1..max_order."""
    if not tokens:
        return set()
    return {" ".join(gram) for gram in everygrams(tokens, 1, max_order)}


def document_tokens(text: str, normalizer: Normalizer | None = None) -> list[str]:
    """Tokenize and normalize a document the same way tweets are featurized."""
    normalizer = normalizer or Normalizer()
    return [normalizer.normalize(raw).lower() for raw in tokenize(text)]


def npmi(joint: float, marginal: float, prior: float) -> float:
    """Normalized PMI from smoothed probabilities, clamped to [-1, 1]."""
    value = math.log(joint / (marginal * prior)) / -math.log(joint)
    return max(-1.0, min(1.0, value))


def build_pmi_model(
    documents: Iterable[TopicDocument],
    topic: str,
    top_percent: float,
    min_df: int = DEFAULT_MIN_DF,
) -> PmiModel:
    """Compute the nPMI table and pool of one topic.

    Args:
        documents: (topic, tokens) pairs; tweets and forum posts alike.
        topic: Topic to measure association with.
        top_percent: Pool size as a percentage of the table.
        min_df: Minimum document frequency for an n-gram to enter the table.

    Raises:
        InsufficientDataError: Fewer than two topics, or the topic is absent.
    """
    if not 0 < top_percent <= 100:
        raise ValueError(f"top_percent must be in (0, 100], got {top_percent}")

    df: Counter[str] = Counter()
    df_topic: Counter[str] = Counter()
    topic_sizes: Counter[str] = Counter()
    for doc_topic, tokens in documents:
        grams = document_ngrams(tokens)
        topic_sizes[doc_topic] += 1
        df.update(grams)
        if doc_topic == topic:
            df_topic.update(grams)

    if len(topic_sizes) < 2:
        raise InsufficientDataError(
            f"PMI needs documents from at least two topics, got {len(topic_sizes)}"
        )
    if topic not in topic_sizes:
        raise InsufficientDataError(f"no PMI documents for topic {topic!r}")

    total = sum(topic_sizes.values()) + 1
    p_topic = (topic_sizes[topic] + 1) / total
    table = {
        gram: npmi((df_topic[gram] + 1) / total, (count + 1) / total, p_topic)
        for gram, count in df.items()
        if count >= min_df
    }
    ranked = sorted(table, key=lambda gram: (-table[gram], gram))
    pool = frozenset(ranked[: pool_size(top_percent, len(table))])
    logger.info("PMI table for %r: %d n-grams, %d pooled", topic, len(table), len(pool))
    return PmiModel(topic=topic, table=table, pool=pool, top_percent=top_percent)


def max_bin(value: float) -> str:
    """Name of the 0.1-wide bin of [-1, 1] holding ``value``: ``(lo,hi]``, or ``[-1.0,-0.9]``."""
    upper = max(math.ceil(round(value / BIN_WIDTH, 9)), -9)
    low, high = (upper - 1) * BIN_WIDTH, upper * BIN_WIDTH
    opening = "[" if upper == -9 else "("
    return f"{opening}{low:.1f},{high:.1f}]"


def pmi_features(
    parsed: ParsedTweet,
    model: PmiModel,
    count: bool = True,
    max_value: bool = True,
    in_topic: bool = True,
) -> FeatureVector:
    """Pool count, binned maximum nPMI and argmax pool membership of a tweet."""
    grams = document_ngrams([token.form for token in parsed.tokens])
    features: FeatureVector = {}

    pooled = len(grams & model.pool)
    if count and pooled:
        features["pmi:count"] = float(pooled)

    scored = [gram for gram in grams if gram in model.table]
    if scored:
        best = min(scored, key=lambda gram: (-model.table[gram], gram))
        if max_value:
            features[f"pmi:max:{max_bin(model.table[best])}"] = 1.0
        if in_topic and best in model.pool:
            features["pmi:intopic"] = 1.0
    return features


def save_pmi_model(model: PmiModel, path: str | Path) -> None:
    """Write ``ngram<TAB>npmi<TAB>in_pool`` rows under a ``#`` header."""
    with Path(path).open("w", encoding="utf-8") as handle:
        handle.write(f"# topic={model.topic}\n# top_percent={model.top_percent!r}\n")
        for gram in sorted(model.table, key=lambda g: (-model.table[g], g)):
            handle.write(f"{gram}\t{model.table[gram]:.17g}\t{int(gram in model.pool)}\n")


def load_pmi_model(path: str | Path) -> PmiModel:
    """Read a model written by :func:`save_pmi_model`."""
    header: dict[str, str] = {}
    table: dict[str, float] = {}
    pool: set[str] = set()
    with Path(path).open(encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if line.startswith("# ") and "\t" not in line:
                key, _, value = line[2:].partition("=")
                header[key.strip()] = value.strip()
                continue
            columns = line.split("\t")
            if len(columns) != 3 or columns[2] not in ("0", "1"):
                raise ModelFormatError(f"{path}:{number}: expected 'ngram<TAB>npmi<TAB>0|1'")
            table[columns[0]] = float(columns[1])
            if columns[2] == "1":
                pool.add(columns[0])
    if "topic" not in header or "top_percent" not in header:
        raise ModelFormatError(f"{path}: missing topic or top_percent header")
    return PmiModel(
        topic=header["topic"],
        table=table,
        pool=frozenset(pool),
        top_percent=float(header["top_percent"]),
    )
