"""Resource container shared by the feature extractors."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path

from stancekit.features.pmi import PmiModel, load_pmi_model
from stancekit.lexicons import (
    CategoryLexicon,
    LexiconBundle,
    PolarityLexicon,
    ScoredLexicon,
    load_lexicon_bundle,
    load_normalization_lexicon,
    load_word_list,
)
from stancekit.normalize import Normalizer

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureResources:
    """Read-only resources for feature extraction.

    Everything here is immutable after loading and may be shared across worker
    threads.

    Attributes:
        lexicons: Category lexicon (``liwc``, ``liwc_dep``, negation window), scored
            and polarity lexicons (``opinion_dep``).
        pmi_models: PMI models keyed by topic (``pmi_*``).
        normalizer: Dictionary and normalization lexicon for fallback parses.
    """

    lexicons: LexiconBundle = field(default_factory=LexiconBundle)
    pmi_models: Mapping[str, PmiModel] = field(default_factory=dict)
    normalizer: Normalizer = field(default_factory=Normalizer)

    @property
    def categories(self) -> CategoryLexicon | None:
        return self.lexicons.categories

    @property
    def scored(self) -> ScoredLexicon | None:
        return self.lexicons.scored

    @property
    def polarity(self) -> PolarityLexicon | None:
        return self.lexicons.polarity

    def with_pmi_model(self, model: PmiModel) -> FeatureResources:
        """Return a copy that also holds ``model`` for its topic."""
        return replace(self, pmi_models={**self.pmi_models, model.topic: model})

    def summary(self) -> str:
        """One-line description of what is loaded."""
        parts = self.lexicons.describe()
        if self.pmi_models:
            parts.append(f"PMI for {', '.join(sorted(self.pmi_models))}")
        return ", ".join(parts) if parts else "no lexical resources"


def load_resources(
    *,
    categories: str | Path | None = None,
    scored: str | Path | None = None,
    positive: str | Path | None = None,
    negative: str | Path | None = None,
    dictionary: str | Path | None = None,
    normalization: str | Path | None = None,
    pmi_models: Mapping[str, str | Path] | None = None,
) -> FeatureResources:
    """Load whichever resources have a path.

    The polarity lexicon needs both ``positive`` and ``negative``.
    """
    lexicons = load_lexicon_bundle(
        categories=categories, scored=scored, positive=positive, negative=negative
    )
    normalizer = Normalizer(
        dictionary=load_word_list(dictionary) if dictionary is not None else frozenset(),
        lexicon=load_normalization_lexicon(normalization) if normalization is not None else {},
    )
    resources = FeatureResources(
        lexicons=lexicons,
        pmi_models={topic: load_pmi_model(path) for topic, path in (pmi_models or {}).items()},
        normalizer=normalizer,
    )
    logger.info("resources: %s", resources.summary())
    return resources
