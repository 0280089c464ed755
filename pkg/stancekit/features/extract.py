"""Compose the enabled feature families into one vector per tweet."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING

from stancekit.exceptions import ResourceError
from stancekit.features.dependencies import dep_features, liwc_dep_features, opinion_dep_features
from stancekit.features.families import PMI_FAMILIES, FeatureConfig, FeatureFamily
from stancekit.features.ngrams import category_count_features, ngram_features, pos_ngram_features
from stancekit.features.pmi import pmi_features
from stancekit.normalize import strip_hashtags
from stancekit.types import FeatureVector, ParsedTweet

if TYPE_CHECKING:
    from stancekit.resources import FeatureResources

logger = logging.getLogger(__name__)

_NEEDS_CATEGORIES = (FeatureFamily.LIWC, FeatureFamily.LIWC_DEP, FeatureFamily.OPINION_DEP)


def check_resources(
    cfg: FeatureConfig, resources: FeatureResources, topic: str | None = None
) -> None:
    """Raise ResourceError naming the first enabled family whose resource is missing."""
    for family in _NEEDS_CATEGORIES:
        if cfg.enabled(family) and resources.categories is None:
            raise ResourceError(f"feature family {family.value!r} needs a category lexicon")
    if cfg.enabled(FeatureFamily.OPINION_DEP):
        if resources.scored is None:
            raise ResourceError("feature family 'opinion_dep' needs a scored lexicon")
        if resources.polarity is None:
            raise ResourceError("feature family 'opinion_dep' needs a polarity lexicon")
    pmi_enabled = sorted(f.value for f in cfg.families & PMI_FAMILIES)
    if pmi_enabled and topic is not None and topic not in resources.pmi_models:
        raise ResourceError(f"feature family {pmi_enabled[0]!r} needs a PMI model for {topic!r}")


def _merge(target: FeatureVector, source: FeatureVector) -> None:
    for name, value in source.items():
        target[name] = target.get(name, 0.0) + value


def featurize(
    parsed: ParsedTweet, cfg: FeatureConfig, resources: FeatureResources
) -> FeatureVector:
    """Extract every enabled family from one tweet.

    Hashtags are stripped first when ``cfg.strip_hashtags`` is set. Families write
    to disjoint namespaces, so the merge is a plain union.

    Raises:
        ResourceError: An enabled family lacks its lexicon or PMI model.
    """
    check_resources(cfg, resources, parsed.tweet.topic)
    if cfg.strip_hashtags:
        parsed = strip_hashtags(parsed)

    vector: FeatureVector = {}
    if cfg.families & {FeatureFamily.UNIGRAM, FeatureFamily.BIGRAM}:
        _merge(vector, ngram_features(parsed, cfg))
    if cfg.enabled(FeatureFamily.POS_BIGRAM) or cfg.enabled(FeatureFamily.POS_TRIGRAM):
        _merge(
            vector,
            pos_ngram_features(
                parsed,
                bigrams=cfg.enabled(FeatureFamily.POS_BIGRAM),
                trigrams=cfg.enabled(FeatureFamily.POS_TRIGRAM),
            ),
        )
    if cfg.enabled(FeatureFamily.LIWC):
        assert resources.categories is not None
        _merge(vector, category_count_features(parsed, resources.categories))
    if cfg.enabled(FeatureFamily.DEP):
        _merge(vector, dep_features(parsed))
    if cfg.enabled(FeatureFamily.LIWC_DEP):
        assert resources.categories is not None
        _merge(vector, liwc_dep_features(parsed, resources.categories))
    if cfg.enabled(FeatureFamily.OPINION_DEP):
        assert resources.categories is not None
        assert resources.scored is not None and resources.polarity is not None
        _merge(
            vector,
            opinion_dep_features(
                parsed, resources.scored, resources.polarity, resources.categories
            ),
        )
    if cfg.families & PMI_FAMILIES:
        _merge(
            vector,
            pmi_features(
                parsed,
                resources.pmi_models[parsed.tweet.topic],
                count=cfg.enabled(FeatureFamily.PMI_COUNT),
                max_value=cfg.enabled(FeatureFamily.PMI_MAX),
                in_topic=cfg.enabled(FeatureFamily.PMI_IN_TOPIC),
            ),
        )
    return vector


def featurize_all(
    corpus: Sequence[ParsedTweet],
    cfg: FeatureConfig,
    resources: FeatureResources,
    threads: int = 1,
) -> list[FeatureVector]:
    """Featurize a corpus, optionally on a thread pool; output order matches input."""
    for topic in sorted({item.tweet.topic for item in corpus}):
        check_resources(cfg, resources, topic)
    if threads <= 1 or len(corpus) < 2:
        vectors = [featurize(item, cfg, resources) for item in corpus]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vectors = list(pool.map(lambda item: featurize(item, cfg, resources), corpus))
    logger.debug("featurized %d tweets with %s", len(vectors), cfg.name)
    return vectors
