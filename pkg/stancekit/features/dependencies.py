"""Dependency features and their lexicon-generalized variants.

Generalized features keep one element of a head-child pair lexical and replace the
other by its lexicon category (``ldep:``) or its combined sentiment score
(``odep:``). Both directions are emitted.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterator

from stancekit.lexicons import (
    CategoryLexicon,
    PolarityLexicon,
    ScoredLexicon,
    apply_negation,
    combined_sentiment,
    lookup_categories,
)
from stancekit.types import EXCLUDED, ROOT, FeatureVector, ParsedTweet, Token


def _lexical_arcs(parsed: ParsedTweet) -> Iterator[tuple[Token, Token]]:
    """Yield (head, child) token pairs of arcs between two real tokens."""
    for arc in parsed.arcs:
        if arc.head >= 1:
            yield parsed.token(arc.head), parsed.token(arc.child)


def _count(names: Iterator[str]) -> FeatureVector:
    return {name: float(count) for name, count in Counter(names).items()}


def dep_features(parsed: ParsedTweet) -> FeatureVector:
    """Count unlabeled dependencies as ``dep:<head>_<child>``; root arcs use ``ROOT``."""

    def names() -> Iterator[str]:
        for arc in parsed.arcs:
            if arc.head == EXCLUDED:
                continue
            child = parsed.token(arc.child).form
            head = "ROOT" if arc.head == ROOT else parsed.token(arc.head).form
            yield f"dep:{head}_{child}"

    return _count(names())


def liwc_dep_features(parsed: ParsedTweet, lex: CategoryLexicon) -> FeatureVector:
    """Count dependencies with one side generalized to a lexicon category."""

    def names() -> Iterator[str]:
        for head, child in _lexical_arcs(parsed):
            for category in sorted(lookup_categories(child.form, lex)):
                yield f"ldep:{head.form}_[{category}]"
            for category in sorted(lookup_categories(head.form, lex)):
                yield f"ldep:[{category}]_{child.form}"

    return _count(names())


def token_sentiment(
    token: Token,
    tokens: tuple[Token, ...],
    scored: ScoredLexicon,
    polarity: PolarityLexicon,
    catlex: CategoryLexicon,
) -> int:
    """Combined sentiment of a token after negation in its two-token window."""
    score = combined_sentiment(token.form, scored, polarity)
    return apply_negation(score, token.index, tokens, catlex)


def opinion_dep_features(
    parsed: ParsedTweet,
    scored: ScoredLexicon,
    polarity: PolarityLexicon,
    catlex: CategoryLexicon,
) -> FeatureVector:
    """Count dependencies with one side replaced by its signed sentiment score."""
    scores: dict[int, int] = {}

    def score_of(token: Token) -> int:
        if token.index not in scores:
            scores[token.index] = token_sentiment(token, parsed.tokens, scored, polarity, catlex)
        return scores[token.index]

    def names() -> Iterator[str]:
        for head, child in _lexical_arcs(parsed):
            child_score = score_of(child)
            if child_score:
                yield f"odep:{head.form}_{child_score:+d}"
            head_score = score_of(head)
            if head_score:
                yield f"odep:{head_score:+d}_{child.form}"

    return _count(names())
