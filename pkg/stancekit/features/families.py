"""Feature families and the per-topic feature configuration."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum

from stancekit.exceptions import ConfigError


class FeatureFamily(str, Enum):
    """One family of features; values are the config-file names."""

    UNIGRAM = "unigram"
    BIGRAM = "bigram"
    DEP = "dep"
    LIWC_DEP = "liwc_dep"
    OPINION_DEP = "opinion_dep"
    POS_BIGRAM = "pos_bigram"
    POS_TRIGRAM = "pos_trigram"
    LIWC = "liwc"
    PMI_COUNT = "pmi_count"
    PMI_MAX = "pmi_max"
    PMI_IN_TOPIC = "pmi_in_topic"


# Alternative spellings, including the published feature-table names, and
# group names used by ablation rows.
_ALIASES: dict[str, tuple[FeatureFamily, ...]] = {
    "high_pmi_n-gram_count": (FeatureFamily.PMI_COUNT,),
    "max_pmi": (FeatureFamily.PMI_MAX,),
    "high_pmi_in_topic": (FeatureFamily.PMI_IN_TOPIC,),
    "pos2": (FeatureFamily.POS_BIGRAM,),
    "pos3": (FeatureFamily.POS_TRIGRAM,),
    "ngram": (FeatureFamily.UNIGRAM, FeatureFamily.BIGRAM),
    "pos": (FeatureFamily.POS_BIGRAM, FeatureFamily.POS_TRIGRAM),
    "pmi": (FeatureFamily.PMI_COUNT, FeatureFamily.PMI_MAX, FeatureFamily.PMI_IN_TOPIC),
    "pmi:*": (FeatureFamily.PMI_COUNT, FeatureFamily.PMI_MAX, FeatureFamily.PMI_IN_TOPIC),
    "dependencies": (FeatureFamily.DEP, FeatureFamily.LIWC_DEP, FeatureFamily.OPINION_DEP),
    "all_dep": (FeatureFamily.DEP, FeatureFamily.LIWC_DEP, FeatureFamily.OPINION_DEP),
}

NGRAM_FAMILIES = frozenset({FeatureFamily.UNIGRAM, FeatureFamily.BIGRAM})
PMI_FAMILIES = frozenset(
    {FeatureFamily.PMI_COUNT, FeatureFamily.PMI_MAX, FeatureFamily.PMI_IN_TOPIC}
)


def parse_families(names: Iterable[str]) -> frozenset[FeatureFamily]:
    """Resolve family names, group names and published aliases to families."""
    families: set[FeatureFamily] = set()
    for raw in names:
        name = raw.strip().lower()
        if not name:
            continue
        if name in _ALIASES:
            families.update(_ALIASES[name])
            continue
        try:
            families.add(FeatureFamily(name))
        except ValueError:
            known = sorted([f.value for f in FeatureFamily] + list(_ALIASES))
            raise ConfigError(
                f"unknown feature family {raw!r}; known: {', '.join(known)}"
            ) from None
    return frozenset(families)


@dataclass(frozen=True)
class FeatureConfig:
    """Which feature families to extract for a topic.

    Attributes:
        families: Enabled families.
        use_stemmed: Emit stemmed n-grams (``us:``/``bs:``).
        use_unstemmed: Emit unstemmed n-grams (``u:``/``b:``).
        strip_hashtags: Remove hashtag tokens before extraction.
    """

    families: frozenset[FeatureFamily] = field(default_factory=frozenset)
    use_stemmed: bool = False
    use_unstemmed: bool = True
    strip_hashtags: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "families", frozenset(FeatureFamily(f) for f in self.families))
        if not self.families:
            raise ConfigError("at least one feature family must be enabled")
        if self.families & NGRAM_FAMILIES and not (self.use_stemmed or self.use_unstemmed):
            raise ConfigError("n-gram families need use_stemmed or use_unstemmed")

    def enabled(self, family: FeatureFamily) -> bool:
        """Return whether a family is enabled."""
        return family in self.families

    def with_families(self, families: Iterable[FeatureFamily]) -> FeatureConfig:
        """Return a copy with a different family set and the same options."""
        return FeatureConfig(
            families=frozenset(families),
            use_stemmed=self.use_stemmed,
            use_unstemmed=self.use_unstemmed,
            strip_hashtags=self.strip_hashtags,
        )

    @property
    def name(self) -> str:
        """Stable readable name, e.g. ``bigram+unigram``."""
        return "+".join(sorted(f.value for f in self.families))
