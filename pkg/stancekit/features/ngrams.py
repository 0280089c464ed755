"""Word n-gram, POS n-gram and category-count features."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from functools import lru_cache

from nltk.stem import PorterStemmer
from nltk.util import ngrams

from stancekit.features.families import FeatureConfig, FeatureFamily
from stancekit.lexicons import CategoryLexicon, lookup_categories
from stancekit.types import FeatureVector, ParsedTweet

_STEMMER = PorterStemmer()


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    """Porter-stem a lowercase word."""
    return _STEMMER.stem(word) if word else word


def _count(names: Iterable[str]) -> FeatureVector:
    return {name: float(count) for name, count in Counter(names).items()}


def ngram_features(parsed: ParsedTweet, cfg: FeatureConfig) -> FeatureVector:
    """Count unigrams and bigrams of normalized tokens.

    Unstemmed n-grams use the ``u:``/``b:`` prefixes and stemmed ones ``us:``/``bs:``;
    bigram parts are joined with ``_``.
    """
    forms = [token.form for token in parsed.tokens]
    variants: list[tuple[str, str, list[str]]] = []
    if cfg.use_unstemmed:
        variants.append(("u:", "b:", forms))
    if cfg.use_stemmed:
        variants.append(("us:", "bs:", [stem(form) for form in forms]))

    names: list[str] = []
    for uni_prefix, bi_prefix, words in variants:
        if cfg.enabled(FeatureFamily.UNIGRAM):
            names.extend(uni_prefix + word for word in words)
        if cfg.enabled(FeatureFamily.BIGRAM):
            names.extend(bi_prefix + "_".join(pair) for pair in ngrams(words, 2))
    return _count(names)


def pos_ngram_features(
    parsed: ParsedTweet,
    bigrams: bool = True,
    trigrams: bool = True,
) -> FeatureVector:
    """Count adjacent POS tag pairs (``pos2:``) and triples (``pos3:``)."""
    tags = [token.pos for token in parsed.tokens]
    names: list[str] = []
    if bigrams:
        names.extend("pos2:" + "_".join(gram) for gram in ngrams(tags, 2))
    if trigrams:
        names.extend("pos3:" + "_".join(gram) for gram in ngrams(tags, 3))
    return _count(names)


def category_count_features(parsed: ParsedTweet, lex: CategoryLexicon) -> FeatureVector:
    """Count tokens per lexicon category (``liwc:<category>``)."""
    return _count(
        f"liwc:{category}"
        for token in parsed.tokens
        for category in lookup_categories(token.form, lex)
    )
