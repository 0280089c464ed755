"""Weak labeling with seed-hashtag rules, quality filters and class balancing."""

from __future__ import annotations

import logging
import random
import re
import tomllib
from collections import Counter, defaultdict
from collections.abc import Collection, Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path

from stancekit.exceptions import InsufficientDataError, LexiconFormatError
from stancekit.normalize import tokenize
from stancekit.types import StanceLabel, TokenClass, Tweet, TweetSource

logger = logging.getLogger(__name__)

DUPLICATE_OVERLAP = 0.8
MIN_DICTIONARY_WORDS = 4

LabeledTweet = tuple[Tweet, StanceLabel]


@dataclass(frozen=True)
class SeedRule:
    """A conjunction of hashtags and keywords that signals one stance for a topic.

    Attributes:
        topic: Topic the rule labels.
        stance: FAVOR or AGAINST.
        terms: Lowercase terms that must all occur; ``#``-prefixed terms match hashtags.
    """

    topic: str
    stance: StanceLabel
    terms: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.stance is StanceLabel.NONE:
            raise ValueError(f"seed rule for {self.topic!r} cannot label NONE")
        if not self.terms or any(not term for term in self.terms):
            raise ValueError(f"seed rule for {self.topic!r} needs non-empty terms")
        object.__setattr__(self, "terms", tuple(term.lower() for term in self.terms))

    @property
    def name(self) -> str:
        """Readable rule name, e.g. ``#hoax&climate``."""
        return "&".join(self.terms)


@dataclass(frozen=True)
class SeedRuleSet:
    """Seed rules for every topic; each topic has FAVOR and AGAINST rules."""

    rules: tuple[SeedRule, ...]

    def __post_init__(self) -> None:
        stances: dict[str, set[StanceLabel]] = defaultdict(set)
        for rule in self.rules:
            stances[rule.topic].add(rule.stance)
        for topic, found in stances.items():
            if found != {StanceLabel.FAVOR, StanceLabel.AGAINST}:
                raise ValueError(f"topic {topic!r} needs at least one FAVOR and one AGAINST rule")

    @property
    def topics(self) -> list[str]:
        """Topics covered by the rule set, in first-seen order."""
        return list(dict.fromkeys(rule.topic for rule in self.rules))

    def for_topic(self, topic: str) -> list[SeedRule]:
        """Return the rules of one topic."""
        return [rule for rule in self.rules if rule.topic == topic]


class NoneSource(str, Enum):
    """Where NONE examples are drawn from."""

    OTHER_TOPICS = "other_topics"
    RANDOM_POOL = "random_pool"


@dataclass(frozen=True)
class BalanceConfig:
    """How balanced FAVOR/AGAINST/NONE sets are built."""

    per_class_cap: int | None = None
    none_sources: tuple[NoneSource, ...] = (NoneSource.OTHER_TOPICS, NoneSource.RANDOM_POOL)
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.per_class_cap is not None and self.per_class_cap <= 0:
            raise ValueError(f"per_class_cap must be greater than 0, got {self.per_class_cap}")


def load_ruleset(path: str | Path) -> SeedRuleSet:
    """Load seed rules from TOML.

    Each top-level table is a topic with ``favor`` and ``against`` lists of
    conjunctive rules::

        [climate]
        favor = [["#actonclimate"], ["#savetheplanet"]]
        against = [["#hoax", "climate"]]
    """
    with Path(path).open("rb") as handle:
        try:
            document = tomllib.load(handle)
        except tomllib.TOMLDecodeError as e:
            raise LexiconFormatError(f"{path}: {e}") from e

    rules: list[SeedRule] = []
    try:
        for topic, table in document.items():
            if not isinstance(table, dict):
                raise LexiconFormatError(f"{path}: topic {topic!r} must be a table")
            for key, stance in (("favor", StanceLabel.FAVOR), ("against", StanceLabel.AGAINST)):
                for terms in table.get(key, []):
                    if isinstance(terms, str):
                        terms = [terms]
                    if not isinstance(terms, list) or not all(isinstance(t, str) for t in terms):
                        raise LexiconFormatError(
                            f"{path}: {topic}.{key} rules must be lists of strings"
                        )
                    rules.append(SeedRule(topic=topic, stance=stance, terms=tuple(terms)))
        ruleset = SeedRuleSet(rules=tuple(rules))
    except LexiconFormatError:
        raise
    except ValueError as e:
        raise LexiconFormatError(f"{path}: {e}") from e
    logger.info("loaded %d seed rules for %d topics", len(rules), len(ruleset.topics))
    return ruleset


MatchUnits = tuple[str, set[str]]


def _match_units(text: str) -> MatchUnits:
    """Return the case-folded text and its whole-token keywords."""
    folded = text.casefold()
    words: set[str] = set()
    for token in tokenize(folded):
        if token.tag is TokenClass.HASHTAG:
            if len(token.text) > 1:
                words.add(token.text[1:])
        else:
            words.add(token.text)
    return folded, words


@lru_cache(maxsize=1024)
def _hashtag_pattern(term: str) -> re.Pattern[str]:
    return re.compile(r"(?<![\w#])" + re.escape(term) + r"(?!\w)")


def _matches(units: MatchUnits, rule: SeedRule) -> bool:
    folded, words = units
    return all(
        _hashtag_pattern(term).search(folded) is not None if term.startswith("#") else term in words
        for term in rule.terms
    )


def match_rule(tweet: Tweet, rule: SeedRule) -> bool:
    """Return whether every term of the rule occurs in the tweet.

    Hashtag terms match a ``#`` that starts a hashtag and end at a word boundary, so
    ``#hoax`` matches ``#Hoax's`` and ``#hoax#fraud`` but not ``#hoaxes``. Bare
    keywords match any whole token, including a hashtag body.
    """
    return _matches(_match_units(tweet.text), rule)


def weak_label(tweets: Iterable[Tweet], ruleset: SeedRuleSet) -> list[LabeledTweet]:
    """Label tweets by the stance of the rules of their topic they match.

    Tweets matching rules of both stances are dropped, as are tweets matching none.
    """
    labeled: list[LabeledTweet] = []
    rules_by_topic = {topic: ruleset.for_topic(topic) for topic in ruleset.topics}
    conflicts = unmatched = 0
    for tweet in tweets:
        units = _match_units(tweet.text)
        rules = rules_by_topic.get(tweet.topic, [])
        stances = {rule.stance for rule in rules if _matches(units, rule)}
        if len(stances) == 1:
            labeled.append((tweet, stances.pop()))
        elif stances:
            conflicts += 1
        else:
            unmatched += 1
    logger.info(
        "weak labeling: %d labeled, %d with conflicting stances, %d unmatched",
        len(labeled),
        conflicts,
        unmatched,
    )
    return labeled


@dataclass
class RuleReport:
    """Match count and sample matches of one seed rule."""

    rule: SeedRule
    matches: int = 0
    samples: list[Tweet] = field(default_factory=list)


def rule_report(
    tweets: Iterable[Tweet], ruleset: SeedRuleSet, samples: int = 5
) -> list[RuleReport]:
    """Count matches per rule and keep the first few matches for manual review."""
    reports = [RuleReport(rule=rule) for rule in ruleset.rules]
    for tweet in tweets:
        units = _match_units(tweet.text)
        for report in reports:
            if report.rule.topic == tweet.topic and _matches(units, report.rule):
                report.matches += 1
                if len(report.samples) < samples:
                    report.samples.append(tweet)
    return reports


def _unigram_set(tweet: Tweet) -> frozenset[str]:
    return frozenset(token.text.lower() for token in tokenize(tweet.text))


def jaccard(a: Collection[str], b: Collection[str]) -> float:
    """Jaccard overlap of two sets; 1.0 for two empty sets."""
    union = len(set(a) | set(b))
    return len(set(a) & set(b)) / union if union else 1.0


def filter_duplicates(tweets: Iterable[Tweet], threshold: float = DUPLICATE_OVERLAP) -> list[Tweet]:
    """Drop tweets overlapping an already kept tweet by ``threshold`` or more.

    Overlap is the Jaccard similarity of lowercased unigram sets; a single pass in
    input order means the earlier tweet wins.
    """
    kept: list[Tweet] = []
    kept_sets: list[frozenset[str]] = []
    # Inverted index: only kept tweets sharing a token can reach the threshold.
    postings: dict[str, list[int]] = defaultdict(list)
    kept_empty = False
    for tweet in tweets:
        unigrams = _unigram_set(tweet)
        if not unigrams:
            if kept_empty:
                continue
            kept_empty = True
        candidates = {position for token in unigrams for position in postings.get(token, ())}
        if any(jaccard(unigrams, kept_sets[position]) >= threshold for position in candidates):
            continue
        position = len(kept)
        kept.append(tweet)
        kept_sets.append(unigrams)
        for token in unigrams:
            postings[token].append(position)
    logger.info("duplicate filter kept %d tweets", len(kept))
    return kept


def dictionary_word_count(tweet: Tweet, dictionary: Collection[str]) -> int:
    """Count alphabetic word tokens of a tweet found in the dictionary."""
    return sum(
        1
        for token in tokenize(tweet.text)
        if token.tag is TokenClass.WORD
        and token.text.isalpha()
        and token.text.lower() in dictionary
    )


def filter_min_dictionary(
    tweets: Iterable[Tweet],
    dictionary: Collection[str],
    minimum: int = MIN_DICTIONARY_WORDS,
) -> list[Tweet]:
    """Keep tweets with at least ``minimum`` dictionary words (repeats count)."""
    if not dictionary:
        raise ValueError("dictionary must be non-empty")
    kept = [tweet for tweet in tweets if dictionary_word_count(tweet, dictionary) >= minimum]
    logger.info("dictionary filter kept %d tweets", len(kept))
    return kept


def _sample_in_order(rng: random.Random, items: Sequence[Tweet], count: int) -> list[Tweet]:
    chosen = sorted(rng.sample(range(len(items)), count))
    return [items[i] for i in chosen]


def balance_classes(
    labeled: Sequence[LabeledTweet],
    pool: Sequence[Tweet],
    cfg: BalanceConfig,
) -> list[LabeledTweet]:
    """Build equally sized FAVOR, AGAINST and NONE sets.

    The class size is the smaller of the FAVOR and AGAINST counts, capped by
    ``cfg.per_class_cap``. Larger stance classes are subsampled; NONE tweets are
    drawn without replacement from the pool sources in ``cfg.none_sources`` order,
    then relabeled to the labeled tweets' topic.

    Raises:
        InsufficientDataError: A stance class is empty, or the pool is too small.
    """
    by_label: dict[StanceLabel, list[Tweet]] = {StanceLabel.FAVOR: [], StanceLabel.AGAINST: []}
    for tweet, label in labeled:
        if label in by_label:
            by_label[label].append(tweet)
    for label, items in by_label.items():
        if not items:
            raise InsufficientDataError(f"no {label.value} tweets to balance")

    size = min(len(items) for items in by_label.values())
    if cfg.per_class_cap is not None:
        size = min(size, cfg.per_class_cap)

    topic = Counter(tweet.topic for tweet, _ in labeled).most_common(1)[0][0]
    used_ids = {tweet.id for tweet, _ in labeled}
    partitions: dict[NoneSource, list[Tweet]] = {
        NoneSource.OTHER_TOPICS: [
            t
            for t in pool
            if t.source is not TweetSource.RANDOM_POOL and t.topic != topic and t.id not in used_ids
        ],
        NoneSource.RANDOM_POOL: [
            t for t in pool if t.source is TweetSource.RANDOM_POOL and t.id not in used_ids
        ],
    }

    rng = random.Random(cfg.rng_seed)
    balanced: list[LabeledTweet] = []
    for label in (StanceLabel.FAVOR, StanceLabel.AGAINST):
        balanced.extend((tweet, label) for tweet in _sample_in_order(rng, by_label[label], size))

    needed = size
    for source in cfg.none_sources:
        candidates = partitions[source]
        take = min(needed, len(candidates))
        for tweet in _sample_in_order(rng, candidates, take):
            relabeled = tweet.model_copy(update={"topic": topic, "gold_stance": StanceLabel.NONE})
            balanced.append((relabeled, StanceLabel.NONE))
        needed -= take
        if not needed:
            break
    if needed:
        raise InsufficientDataError(
            f"NONE pool for {topic!r} is {needed} tweets short of the {size} required"
        )

    logger.info("balanced %r: %d tweets per class", topic, size)
    return balanced


def harvest_topic(
    tweets: Sequence[Tweet],
    ruleset: SeedRuleSet,
    dictionary: Collection[str],
    pool: Sequence[Tweet],
    cfg: BalanceConfig,
) -> list[LabeledTweet]:
    """Weak-label, filter and balance the harvested tweets of one topic."""
    labeled = weak_label(tweets, ruleset)
    label_of = {tweet.id: label for tweet, label in labeled}
    filtered = filter_min_dictionary(filter_duplicates(t for t, _ in labeled), dictionary)
    stance_tweets = [
        (tweet.model_copy(update={"gold_stance": label_of[tweet.id]}), label_of[tweet.id])
        for tweet in filtered
    ]
    pool_tweets = filter_min_dictionary(filter_duplicates(pool), dictionary)
    return balance_classes(stance_tweets, pool_tweets, cfg)
