"""Type definitions for stancekit."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class StanceLabel(str, Enum):
    """Stance of a tweet toward its topic."""

    FAVOR = "FAVOR"
    AGAINST = "AGAINST"
    NONE = "NONE"


# Fixed label order; also the tie-break order for prediction.
LABEL_ORDER: tuple[StanceLabel, ...] = (StanceLabel.FAVOR, StanceLabel.AGAINST, StanceLabel.NONE)


class TweetSource(str, Enum):
    """Where a tweet record came from."""

    OFFICIAL = "official"
    HARVESTED = "harvested"
    RANDOM_POOL = "random_pool"


class Tweet(BaseModel):
    """A raw tweet record as stored in the JSONL corpus files."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    id: str = Field(min_length=1)
    text: str = Field(min_length=1)
    topic: str = ""
    gold_stance: StanceLabel | None = Field(default=None, alias="stance")
    source: TweetSource = TweetSource.HARVESTED

    @field_validator("text")
    @classmethod
    def _text_not_blank(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("text must contain a non-whitespace character")
        return value

    @model_validator(mode="after")
    def _topic_required(self) -> Tweet:
        if self.source is not TweetSource.RANDOM_POOL and not self.topic:
            raise ValueError(f"tweet {self.id!r} from source {self.source.value!r} needs a topic")
        return self

    def to_record(self) -> dict[str, str]:
        """Return the JSONL record for this tweet (wire field names)."""
        return self.model_dump(mode="json", by_alias=True, exclude_none=True)


class TokenClass(str, Enum):
    """Fallback tagset assigned by the internal tokenizer."""

    HASHTAG = "HASHTAG"
    MENTION = "MENTION"
    URL = "URL"
    NUM = "NUM"
    PUNCT = "PUNCT"
    WORD = "WORD"


@dataclass(frozen=True, slots=True)
class Token:
    """One token of a parsed tweet.

    Attributes:
        index: 1-based position in the tweet.
        surface: Token as written.
        normalized: Token after repeat squeezing and lexicon substitution.
        pos: Part-of-speech tag (external tagset or the fallback tagset).
    """

    index: int
    surface: str
    normalized: str
    pos: str

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"token index must be >= 1, got {self.index}")
        if not self.normalized:
            raise ValueError(f"token {self.index} has an empty normalized form")

    @property
    def form(self) -> str:
        """Lowercased normalized form used by every feature extractor."""
        return self.normalized.lower()


ROOT = 0
EXCLUDED = -1


@dataclass(frozen=True, slots=True)
class DepArc:
    """Unlabeled dependency arc. ``head`` 0 is the root, -1 excludes the child."""

    head: int
    child: int

    def __post_init__(self) -> None:
        if self.child < 1:
            raise ValueError(f"arc child must be >= 1, got {self.child}")
        if self.head < EXCLUDED:
            raise ValueError(f"arc head must be >= -1, got {self.head}")
        if self.head == self.child:
            raise ValueError(f"arc head equals child ({self.child})")


@dataclass(frozen=True)
class ParsedTweet:
    """A tweet enriched with tokens, POS tags and an unlabeled dependency parse."""

    tweet: Tweet
    tokens: tuple[Token, ...] = ()
    arcs: tuple[DepArc, ...] = ()
    fallback: bool = False
    replacements: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        for position, token in enumerate(self.tokens, start=1):
            if token.index != position:
                raise ValueError(
                    f"tweet {self.tweet.id!r}: token indices must be contiguous from 1, "
                    f"found {token.index} at position {position}"
                )
        count = len(self.tokens)
        seen: set[int] = set()
        for arc in self.arcs:
            if arc.child > count:
                raise ValueError(f"tweet {self.tweet.id!r}: arc child {arc.child} > {count} tokens")
            if arc.head > count:
                raise ValueError(f"tweet {self.tweet.id!r}: arc head {arc.head} > {count} tokens")
            if arc.child in seen:
                raise ValueError(f"tweet {self.tweet.id!r}: token {arc.child} has two heads")
            seen.add(arc.child)

    def token(self, index: int) -> Token:
        """Return the token at a 1-based index."""
        return self.tokens[index - 1]


FeatureVector = dict[str, float]
"""Sparse map from namespaced feature name to a positive value."""
