"""Tweet corpus files and the dependency-parse interchange format.

Tweets are stored as UTF-8 JSONL, one record per line::

    {"id": "t1", "text": "...", "topic": "climate", "stance": "FAVOR", "source": "official"}

Parses are stored as CoNLL-style blocks separated by a blank line. Each block starts
with ``# id=<tweet id>`` followed by one line per token with five tab-separated
fields: index, surface, normalized, pos, head. Head 0 is the root, -1 excludes the
token from the tree and ``_`` marks a token without an arc.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from pathlib import Path

from pydantic import ValidationError

from stancekit.exceptions import CorpusFormatError
from stancekit.normalize import Normalizer
from stancekit.types import EXCLUDED, DepArc, ParsedTweet, Token, Tweet

logger = logging.getLogger(__name__)

PARSE_FIELDS = 5
NO_HEAD = "_"
_ID_PREFIX = "# id="

ParseEntry = tuple[tuple[Token, ...], tuple[DepArc, ...]]


def _jsonl_lines(path: str | Path) -> Iterator[tuple[int, str]]:
    with Path(path).open(encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if line.strip():
                yield number, line


def load_tweets(path: str | Path) -> list[Tweet]:
    """Load a JSONL tweet file.

    Args:
        path: Path to the JSONL file.

    Returns:
        Tweets in file order.

    Raises:
        CorpusFormatError: A line is not a valid record, or an id repeats.
    """
    tweets: list[Tweet] = []
    seen: dict[str, int] = {}
    for number, line in _jsonl_lines(path):
        try:
            tweet = Tweet.model_validate_json(line)
        except ValidationError as e:
            reason = e.errors()[0]["msg"] if e.errors() else str(e)
            raise CorpusFormatError(
                f"malformed tweet record: {reason}", path=path, line=number
            ) from e
        if tweet.id in seen:
            raise CorpusFormatError(
                f"duplicate tweet id {tweet.id!r} (first seen on line {seen[tweet.id]})",
                path=path,
                line=number,
            )
        seen[tweet.id] = number
        tweets.append(tweet)
    logger.info("loaded %d tweets from %s", len(tweets), path)
    return tweets


def save_tweets(tweets: Iterable[Tweet], path: str | Path) -> None:
    """Write tweets as JSONL, one record per line."""
    with Path(path).open("w", encoding="utf-8") as handle:
        for tweet in tweets:
            handle.write(json.dumps(tweet.to_record(), ensure_ascii=False))
            handle.write("\n")


def load_topic_documents(path: str | Path) -> list[tuple[str, str]]:
    """Load a ``{"topic": ..., "text": ...}`` JSONL file of topic-labeled documents.

    Tweet files are valid inputs too; extra fields are ignored.
    """
    documents: list[tuple[str, str]] = []
    for number, line in _jsonl_lines(path):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusFormatError(f"invalid JSON: {e.msg}", path=path, line=number) from e
        topic, text = record.get("topic"), record.get("text")
        if not isinstance(topic, str) or not topic or not isinstance(text, str):
            raise CorpusFormatError(
                "record needs string 'topic' and 'text'", path=path, line=number
            )
        documents.append((topic, text))
    logger.info("loaded %d topic documents from %s", len(documents), path)
    return documents


def _parse_block(lines: Sequence[tuple[int, str]], path: str | Path) -> tuple[str, ParseEntry]:
    start, header = lines[0]
    if not header.startswith(_ID_PREFIX) or not header[len(_ID_PREFIX) :].strip():
        raise CorpusFormatError(
            f"block must start with '{_ID_PREFIX}<tweet id>'", path=path, line=start
        )
    tweet_id = header[len(_ID_PREFIX) :].strip()

    rows = lines[1:]
    count = len(rows)
    tokens: list[Token] = []
    arcs: list[DepArc] = []
    for expected, (number, line) in enumerate(rows, start=1):
        fields = line.split("\t")
        if len(fields) != PARSE_FIELDS:
            raise CorpusFormatError(
                f"block {tweet_id!r}: expected {PARSE_FIELDS} fields, got {len(fields)}",
                path=path,
                line=number,
            )
        raw_index, surface, normalized, pos, raw_head = fields
        try:
            index = int(raw_index)
            head = None if raw_head == NO_HEAD else int(raw_head)
        except ValueError as e:
            raise CorpusFormatError(
                f"block {tweet_id!r}: non-integer index or head", path=path, line=number
            ) from e
        if index != expected:
            raise CorpusFormatError(
                f"block {tweet_id!r}: token index {index} where {expected} was expected",
                path=path,
                line=number,
            )
        if head is not None and (head < EXCLUDED or head > count or head == index):
            raise CorpusFormatError(
                f"block {tweet_id!r}: head {head} out of range for token {index} of {count}",
                path=path,
                line=number,
            )
        try:
            tokens.append(Token(index=index, surface=surface, normalized=normalized, pos=pos))
        except ValueError as e:
            raise CorpusFormatError(f"block {tweet_id!r}: {e}", path=path, line=number) from e
        if head is not None:
            arcs.append(DepArc(head=head, child=index))
    return tweet_id, (tuple(tokens), tuple(arcs))


def load_parses(path: str | Path) -> dict[str, ParseEntry]:
    """Load a parse interchange file into a map from tweet id to (tokens, arcs).

    Raises:
        CorpusFormatError: With the offending line for non-contiguous indices, heads
            out of range, wrong field counts or repeated tweet ids.
    """
    parses: dict[str, ParseEntry] = {}

    def flush(block: list[tuple[int, str]]) -> None:
        if not block:
            return
        tweet_id, entry = _parse_block(block, path)
        if tweet_id in parses:
            raise CorpusFormatError(
                f"duplicate parse block for {tweet_id!r}", path=path, line=block[0][0]
            )
        parses[tweet_id] = entry

    block: list[tuple[int, str]] = []
    with Path(path).open(encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if line.strip():
                block.append((number, line))
            else:
                flush(block)
                block = []
    flush(block)

    logger.info("loaded %d parses from %s", len(parses), path)
    return parses


def save_parses(parsed: Iterable[ParsedTweet], path: str | Path) -> None:
    """Write parsed tweets in the parse interchange format."""
    with Path(path).open("w", encoding="utf-8") as handle:
        first = True
        for item in parsed:
            if not first:
                handle.write("\n")
            first = False
            heads = {arc.child: str(arc.head) for arc in item.arcs}
            handle.write(f"{_ID_PREFIX}{item.tweet.id}\n")
            for token in item.tokens:
                head = heads.get(token.index, NO_HEAD)
                handle.write(
                    f"{token.index}\t{token.surface}\t{token.normalized}\t{token.pos}\t{head}\n"
                )


def attach_parses(
    tweets: Sequence[Tweet],
    parses: Mapping[str, ParseEntry],
    normalizer: Normalizer | None = None,
) -> list[ParsedTweet]:
    """Pair tweets with their external parses, falling back to the flat parse.

    Args:
        tweets: Tweets to enrich.
        parses: External parses keyed by tweet id.
        normalizer: Normalizer used for tweets without an external parse.

    Returns:
        One ParsedTweet per input tweet, in input order. Fallback parses carry
        ``fallback=True``.
    """
    normalizer = normalizer or Normalizer()
    result: list[ParsedTweet] = []
    for tweet in tweets:
        entry = parses.get(tweet.id)
        if entry is None:
            result.append(normalizer.parse(tweet))
        else:
            tokens, arcs = entry
            result.append(ParsedTweet(tweet=tweet, tokens=tokens, arcs=arcs))
    fallbacks = sum(1 for item in result if item.fallback)
    if fallbacks:
        logger.info("%d of %d tweets use the fallback parse", fallbacks, len(result))
    return result


def load_corpus(
    tweets_path: str | Path,
    parses_path: str | Path | None = None,
    normalizer: Normalizer | None = None,
) -> list[ParsedTweet]:
    """Load tweets and, when given, their parse file, and attach them."""
    tweets = load_tweets(tweets_path)
    parses = load_parses(parses_path) if parses_path is not None else {}
    return attach_parses(tweets, parses, normalizer)
