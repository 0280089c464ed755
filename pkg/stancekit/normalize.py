"""Tweet tokenization and normalization.

The pipeline order is fixed: tokenize, squeeze repeated characters, then check the
squeezed form against the dictionary and substitute lexical variants from the
normalization lexicon. The same module provides the fallback tagset and the flat
chain parse used when no external parse exists for a tweet.
"""

from __future__ import annotations

import dataclasses
import logging
import re
from collections.abc import Collection, Mapping, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

from stancekit.types import EXCLUDED, ROOT, DepArc, ParsedTweet, Token, TokenClass, Tweet

logger = logging.getLogger(__name__)

NormalizationLexicon = Mapping[str, str]

_URL_PREFIXES = ("http://", "https://", "www.")
_NUM_PATTERN = re.compile(r"^[\d.,%]*\d[\d.,%]*$")
_PUNCT_PATTERN = re.compile(r"^[^\w\s]+$")
_LEADING_PUNCT = re.compile(r"^[^\w\s#@]+")
_TRAILING_PUNCT = re.compile(r"[^\w\s]+$")
_REPEAT_RUN = re.compile(r"(.)\1{2,}", re.DOTALL)

_UNCHANGED_CLASSES = frozenset(
    {TokenClass.HASHTAG, TokenClass.MENTION, TokenClass.URL, TokenClass.NUM, TokenClass.PUNCT}
)


class RawToken(NamedTuple):
    """A token produced by :func:`tokenize` with its fallback class."""

    text: str
    tag: TokenClass


def classify_token(text: str) -> TokenClass:
    """Assign a fallback tag to a single token."""
    if text.startswith("#"):
        return TokenClass.HASHTAG
    if text.startswith("@"):
        return TokenClass.MENTION
    if text.lower().startswith(_URL_PREFIXES):
        return TokenClass.URL
    if _NUM_PATTERN.match(text):
        return TokenClass.NUM
    if _PUNCT_PATTERN.match(text):
        return TokenClass.PUNCT
    return TokenClass.WORD


def _split_chunk(chunk: str) -> list[str]:
    if chunk.lower().startswith(_URL_PREFIXES) or _NUM_PATTERN.match(chunk):
        return [chunk]
    if _PUNCT_PATTERN.match(chunk):
        return [chunk]

    pieces: list[str] = []
    leading = _LEADING_PUNCT.match(chunk)
    if leading:
        pieces.append(leading.group())
        chunk = chunk[leading.end() :]

    trailing = _TRAILING_PUNCT.search(chunk)
    if trailing and trailing.start() > 0:
        pieces.append(chunk[: trailing.start()])
        pieces.append(trailing.group())
    elif chunk:
        pieces.append(chunk)
    return pieces


def tokenize(text: str) -> list[RawToken]:
    """Split tweet text into classified tokens.

    Whitespace splits chunks; leading and trailing punctuation is detached from word
    chunks. A leading ``#`` or ``@`` stays attached, so hashtags and mentions survive
    intact. URLs and numbers are kept whole.

    Args:
        text: Raw tweet text.

    Returns:
        Tokens in their original order, each with its fallback class.
    """
    tokens: list[RawToken] = []
    for chunk in text.split():
        for piece in _split_chunk(chunk):
            tokens.append(RawToken(piece, classify_token(piece)))
    return tokens


def squeeze_repeats(token: str) -> str:
    """Reduce every run of three or more identical characters to two."""
    return _REPEAT_RUN.sub(r"\1\1", token)


def normalize_token(
    token: str,
    dictionary: Collection[str],
    lexicon: NormalizationLexicon,
) -> str:
    """Replace an out-of-dictionary word by its canonical lexical variant.

    Args:
        token: A repeat-squeezed token.
        dictionary: Lowercase dictionary words.
        lexicon: Map from lowercase variant to canonical word.

    Returns:
        The canonical form when the token is a non-dictionary word listed in the
        lexicon, otherwise the token unchanged.
    """
    if classify_token(token) in _UNCHANGED_CLASSES:
        return token
    lowered = token.lower()
    if lowered in dictionary:
        return token
    return lexicon.get(lowered, token)


def fallback_parse(
    tokens: Sequence[RawToken],
    normalized: Sequence[str] | None = None,
) -> tuple[list[Token], list[DepArc]]:
    """Build a flat parse: fallback POS tags and a left-to-right chain of arcs.

    Token 1 hangs off the root and every later token hangs off its predecessor.

    Args:
        tokens: Classified tokens from :func:`tokenize`.
        normalized: Normalized forms aligned with ``tokens``; defaults to the surface.

    Returns:
        The token list and the chain arcs.
    """
    forms = list(normalized) if normalized is not None else [t.text for t in tokens]
    if len(forms) != len(tokens):
        raise ValueError(f"{len(forms)} normalized forms for {len(tokens)} tokens")

    parsed_tokens = [
        Token(index=i, surface=raw.text, normalized=form or raw.text, pos=raw.tag.value)
        for i, (raw, form) in enumerate(zip(tokens, forms, strict=True), start=1)
    ]
    arcs = [DepArc(head=i - 1 if i > 1 else ROOT, child=i) for i in range(1, len(tokens) + 1)]
    return parsed_tokens, arcs


def is_hashtag(token: Token) -> bool:
    """Return whether a parsed token is a hashtag under the fallback classification."""
    return (
        classify_token(token.surface) is TokenClass.HASHTAG
        or token.normalized.startswith("#")
    )


def strip_hashtags(parsed: ParsedTweet) -> ParsedTweet:
    """Remove every hashtag token, recompact indices and drop incident arcs."""
    kept = [token for token in parsed.tokens if not is_hashtag(token)]
    if len(kept) == len(parsed.tokens):
        return parsed

    remap = {token.index: new for new, token in enumerate(kept, start=1)}
    tokens = tuple(dataclasses.replace(token, index=remap[token.index]) for token in kept)

    arcs: list[DepArc] = []
    for arc in parsed.arcs:
        if arc.child not in remap:
            continue
        if arc.head in (ROOT, EXCLUDED):
            arcs.append(DepArc(head=arc.head, child=remap[arc.child]))
        elif arc.head in remap:
            arcs.append(DepArc(head=remap[arc.head], child=remap[arc.child]))

    return dataclasses.replace(parsed, tokens=tokens, arcs=tuple(arcs))


@dataclass(frozen=True)
class Normalizer:
    """Dictionary and normalization lexicon bundled for whole-tweet normalization.

    Attributes:
        dictionary: Lowercase dictionary words.
        lexicon: Map from lowercase out-of-vocabulary variant to canonical word.
    """

    dictionary: frozenset[str] = field(default_factory=frozenset)
    lexicon: Mapping[str, str] = field(default_factory=dict)

    def normalize(self, raw: RawToken) -> str:
        """Squeeze and substitute a single token."""
        squeezed = squeeze_repeats(raw.text)
        if raw.tag in _UNCHANGED_CLASSES:
            return squeezed
        return normalize_token(squeezed, self.dictionary, self.lexicon)

    def parse(self, tweet: Tweet) -> ParsedTweet:
        """Tokenize, normalize and fallback-parse a tweet."""
        raw_tokens = tokenize(tweet.text)
        forms = [self.normalize(raw) for raw in raw_tokens]
        replacements = {
            raw.text: form
            for raw, form in zip(raw_tokens, forms, strict=True)
            if form != raw.text
        }
        tokens, arcs = fallback_parse(raw_tokens, forms)
        if replacements:
            logger.debug("tweet %s: %d normalization replacements", tweet.id, len(replacements))
        return ParsedTweet(
            tweet=tweet,
            tokens=tuple(tokens),
            arcs=tuple(arcs),
            fallback=True,
            replacements=replacements,
        )
