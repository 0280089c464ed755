"""Category, scored and polarity lexicons and the combined sentiment score.

File formats:

- Category lexicon: ``%``-prefixed header listing the category names, then one entry
  per line ``word<TAB>cat1,cat2``; a trailing ``*`` marks a prefix entry.
- Scored lexicon: ``word<TAB>integer`` with scores in [-5, 5].
- Polarity lexicon: two word lists, positive and negative.
- Normalization lexicon: ``variant<TAB>canonical``.

Lines starting with ``#`` (or ``;`` in word lists, as the published opinion lexicon
uses) are comments everywhere.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from stancekit.exceptions import LexiconFormatError
from stancekit.types import Token

logger = logging.getLogger(__name__)

NEGATION_CATEGORY = "negate"
NEGATION_WINDOW = 2
SCORE_RANGE = (-5, 5)


def _content_lines(
    path: str | Path,
    comment_prefixes: tuple[str, ...] = ("#",),
) -> Iterator[tuple[int, str]]:
    with Path(path).open(encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith(comment_prefixes):
                continue
            yield number, line


@dataclass(frozen=True)
class CategoryLexicon:
    """LIWC-style word-category dictionary with trailing-wildcard prefixes.

    Attributes:
        categories: Declared category names, in header order.
        exact: Map from word to its categories.
        prefixes: Map from prefix (wildcard stripped) to its categories.
    """

    categories: tuple[str, ...]
    exact: Mapping[str, frozenset[str]] = field(default_factory=dict)
    prefixes: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        declared = set(self.categories)
        if any(not name for name in declared):
            raise LexiconFormatError("category names must be non-empty")
        for table in (self.exact, self.prefixes):
            for entry, cats in table.items():
                unknown = cats - declared
                if unknown:
                    raise LexiconFormatError(
                        f"entry {entry!r} uses undeclared categories {sorted(unknown)}"
                    )


@dataclass(frozen=True)
class PolarityLexicon:
    """Positive and negative word sets (disjoint)."""

    positive: frozenset[str] = field(default_factory=frozenset)
    negative: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        overlap = self.positive & self.negative
        if overlap:
            raise LexiconFormatError(
                f"words listed as both positive and negative: {sorted(overlap)[:5]}"
            )


ScoredLexicon = Mapping[str, int]


@dataclass(frozen=True)
class LexiconBundle:
    """All lexical resources the feature extractors consume."""

    categories: CategoryLexicon | None = None
    scored: ScoredLexicon | None = None
    polarity: PolarityLexicon | None = None

    def describe(self) -> list[str]:
        """Short descriptions of the loaded lexicons."""
        parts = []
        if self.categories is not None:
            parts.append(f"{len(self.categories.categories)} categories")
        if self.scored is not None:
            parts.append(f"{len(self.scored)} scored words")
        if self.polarity is not None:
            parts.append(f"{len(self.polarity.positive) + len(self.polarity.negative)} polar words")
        return parts


def load_category_lexicon(path: str | Path) -> CategoryLexicon:
    """Load a category lexicon file."""
    categories: tuple[str, ...] | None = None
    exact: dict[str, set[str]] = {}
    prefixes: dict[str, set[str]] = {}

    for number, line in _content_lines(path):
        if categories is None:
            if not line.startswith("%"):
                raise LexiconFormatError(f"{path}:{number}: expected '%' category header")
            categories = tuple(line.lstrip("%").split())
            continue

        entry, sep, cats = line.partition("\t")
        entry = entry.strip().lower()
        if not sep or not entry:
            raise LexiconFormatError(f"{path}:{number}: expected 'word<TAB>categories'")
        names = {name.strip() for name in cats.split(",") if name.strip()}
        if not names:
            raise LexiconFormatError(f"{path}:{number}: entry {entry!r} lists no categories")
        if entry.endswith("*"):
            prefixes.setdefault(entry.rstrip("*"), set()).update(names)
        else:
            exact.setdefault(entry, set()).update(names)

    if categories is None:
        raise LexiconFormatError(f"{path}: missing '%' category header")
    lexicon = CategoryLexicon(
        categories=categories,
        exact={word: frozenset(cats) for word, cats in exact.items()},
        prefixes={prefix: frozenset(cats) for prefix, cats in prefixes.items()},
    )
    logger.info(
        "loaded category lexicon %s: %d categories, %d words, %d prefixes",
        path,
        len(categories),
        len(exact),
        len(prefixes),
    )
    return lexicon


def load_scored_lexicon(path: str | Path) -> dict[str, int]:
    """Load a ``word<TAB>score`` lexicon with integer scores in [-5, 5]."""
    low, high = SCORE_RANGE
    scores: dict[str, int] = {}
    for number, line in _content_lines(path):
        word, sep, value = line.rpartition("\t")
        if not sep or not word.strip():
            raise LexiconFormatError(f"{path}:{number}: expected 'word<TAB>score'")
        try:
            score = int(value)
        except ValueError as e:
            raise LexiconFormatError(f"{path}:{number}: score {value!r} is not an integer") from e
        if not low <= score <= high:
            raise LexiconFormatError(f"{path}:{number}: score {score} outside [{low}, {high}]")
        scores[word.strip().lower()] = score
    logger.info("loaded scored lexicon %s: %d words", path, len(scores))
    return scores


def load_word_list(path: str | Path) -> frozenset[str]:
    """Load a one-word-per-line list, lowercased."""
    words = frozenset(line.strip().lower() for _, line in _content_lines(path, ("#", ";")))
    logger.debug("loaded word list %s: %d words", path, len(words))
    return words


def load_polarity_lexicon(positive: str | Path, negative: str | Path) -> PolarityLexicon:
    """Load the positive and negative word lists."""
    return PolarityLexicon(positive=load_word_list(positive), negative=load_word_list(negative))


def load_normalization_lexicon(path: str | Path) -> dict[str, str]:
    """Load a ``variant<TAB>canonical`` normalization lexicon."""
    lexicon: dict[str, str] = {}
    for number, line in _content_lines(path):
        columns = line.split("\t")
        if len(columns) != 2 or not columns[0].strip() or not columns[1].strip():
            raise LexiconFormatError(f"{path}:{number}: expected 'variant<TAB>canonical'")
        lexicon[columns[0].strip().lower()] = columns[1].strip()
    logger.info("loaded normalization lexicon %s: %d variants", path, len(lexicon))
    return lexicon


def lookup_categories(word: str, lex: CategoryLexicon) -> frozenset[str]:
    """Return the categories of a lowercase word.

    The result is the union of the exact entry's categories and those of the longest
    prefix entry the word starts with.
    """
    found: frozenset[str] = lex.exact.get(word, frozenset())
    if lex.prefixes:
        for end in range(len(word), -1, -1):
            prefix_cats = lex.prefixes.get(word[:end])
            if prefix_cats is not None:
                return found | prefix_cats
    return found


def _sign(value: int) -> int:
    return (value > 0) - (value < 0)


def combined_sentiment(word: str, scored: ScoredLexicon, polarity: PolarityLexicon) -> int:
    """Fuse the scored and polarity lexicons into a score in {-2, ..., 2}.

    Agreement gives +/-2, a single listing (the other lexicon silent or neutral) gives
    +/-1, contradiction or no listing gives 0. Scored-lexicon magnitude is ignored.
    """
    a = _sign(scored.get(word, 0))
    if word in polarity.positive:
        b = 1
    elif word in polarity.negative:
        b = -1
    else:
        b = 0

    if a and b:
        return 2 * a if a == b else 0
    return a or b


def has_negation(position: int, tokens: Sequence[Token], lex: CategoryLexicon) -> bool:
    """Return whether either of the two tokens before ``position`` is a negation."""
    for offset in range(1, NEGATION_WINDOW + 1):
        before = position - offset
        if before >= 1 and NEGATION_CATEGORY in lookup_categories(tokens[before - 1].form, lex):
            return True
    return False


def apply_negation(score: int, position: int, tokens: Sequence[Token], lex: CategoryLexicon) -> int:
    """Invert a combined score when a negation occurs in the two preceding tokens.

    Args:
        score: Combined sentiment score of the token at ``position``.
        position: 1-based index of the scored token.
        tokens: Tokens of the tweet.
        lex: Category lexicon providing the ``negate`` category.

    Returns:
        ``-score`` if a negation precedes within the window, otherwise ``score``.
    """
    if not 1 <= position <= len(tokens):
        raise ValueError(f"position {position} outside 1..{len(tokens)}")
    if score and has_negation(position, tokens, lex):
        return -score
    return score


def load_lexicon_bundle(
    *,
    categories: str | Path | None = None,
    scored: str | Path | None = None,
    positive: str | Path | None = None,
    negative: str | Path | None = None,
) -> LexiconBundle:
    """Load whichever lexicons have a path; polarity needs both word lists."""
    if (positive is None) != (negative is None):
        raise LexiconFormatError("positive and negative polarity lists must be given together")
    return LexiconBundle(
        categories=load_category_lexicon(categories) if categories is not None else None,
        scored=load_scored_lexicon(scored) if scored is not None else None,
        polarity=(
            load_polarity_lexicon(positive, negative)
            if positive is not None and negative is not None
            else None
        ),
    )
