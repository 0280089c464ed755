"""Pytest configuration and fixtures."""

import json
import tempfile
from pathlib import Path

import pytest

from stancekit.lexicons import CategoryLexicon, PolarityLexicon
from stancekit.types import DepArc, ParsedTweet, StanceLabel, Token, Tweet, TweetSource

REPO_ROOT = Path(__file__).resolve().parents[1]


def make_tweet(
    tweet_id: str,
    text: str,
    topic: str = "hillary",
    stance: StanceLabel | None = None,
    source: TweetSource = TweetSource.HARVESTED,
) -> Tweet:
    """Build a tweet with sensible defaults."""
    return Tweet(id=tweet_id, text=text, topic=topic, gold_stance=stance, source=source)


def write_jsonl(path: Path, tweets: list[Tweet]) -> Path:
    """Write tweets as JSONL and return the path."""
    path.write_text(
        "".join(json.dumps(t.to_record()) + "\n" for t in tweets), encoding="utf-8"
    )
    return path


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def category_lexicon() -> CategoryLexicon:
    """Toy category lexicon with one prefix entry per emotion category."""
    return CategoryLexicon(
        categories=("posemo", "negemo", "negate", "pronoun"),
        exact={
            "i": frozenset({"pronoun"}),
            "not": frozenset({"negate"}),
        },
        prefixes={
            "lov": frozenset({"posemo"}),
            "hat": frozenset({"negemo"}),
        },
    )


@pytest.fixture
def scored_lexicon() -> dict[str, int]:
    """Toy scored lexicon."""
    return {"love": 3, "hate": -3, "good": 2}


@pytest.fixture
def polarity_lexicon() -> PolarityLexicon:
    """Toy polarity lexicon."""
    return PolarityLexicon(
        positive=frozenset({"love", "good"}), negative=frozenset({"hate", "bad"})
    )


@pytest.fixture
def toy_parsed() -> ParsedTweet:
    """Hand-built 5-token parse of ``I do not love #Hillary``.

    Arcs: do is the root, I and love attach to do, not attaches to love and the
    hashtag is excluded from the tree (head -1).
    """
    tweet = make_tweet("toy", "I do not love #Hillary", stance=StanceLabel.AGAINST)
    tokens = (
        Token(index=1, surface="I", normalized="I", pos="O"),
        Token(index=2, surface="do", normalized="do", pos="V"),
        Token(index=3, surface="not", normalized="not", pos="R"),
        Token(index=4, surface="love", normalized="love", pos="V"),
        Token(index=5, surface="#Hillary", normalized="#Hillary", pos="#"),
    )
    arcs = (
        DepArc(head=2, child=1),
        DepArc(head=0, child=2),
        DepArc(head=4, child=3),
        DepArc(head=2, child=4),
        DepArc(head=-1, child=5),
    )
    return ParsedTweet(tweet=tweet, tokens=tokens, arcs=arcs)
