"""stancekit: semi-supervised stance classification for tweets.

This library provides:
- Weak labeling of harvested tweets with seed-hashtag rules, plus quality filters
- Tweet normalization and a parse interchange format with a fallback parser
- Lexicon-generalized n-gram, dependency, category and PMI features
- Per-topic Multinomial Naive Bayes with correlation or gain-ratio feature selection
- Evaluation, feature ablation, learning curves and dev-set sweeps

Example:
    ```python
    from stancekit import FeatureConfig, FeatureResources, load_corpus
    from stancekit.evaluation import ModelSpec, train_and_evaluate
    from stancekit.features import parse_families

    train = load_corpus("abortion.train.jsonl", "abortion.train.parses.tsv")
    test = load_corpus("abortion.test.jsonl", "abortion.test.parses.tsv")

    spec = ModelSpec(
        name="unigram",
        features=FeatureConfig(families=parse_families(["unigram"])),
    )
    report = train_and_evaluate(train, test, spec, FeatureResources())
    print(report.semeval_avg)
    ```
"""

from stancekit.corpus_io import (
    attach_parses,
    load_corpus,
    load_parses,
    load_topic_documents,
    load_tweets,
    save_parses,
    save_tweets,
)
from stancekit.evaluation import (
    EvalReport,
    ModelSpec,
    evaluate,
    learning_curve,
    run_ablation,
    run_sweep,
    train_and_evaluate,
)
from stancekit.exceptions import (
    ConfigError,
    CorpusFormatError,
    InsufficientDataError,
    LexiconFormatError,
    ModelFormatError,
    ResourceError,
    StanceKitError,
)
from stancekit.features import FeatureConfig, FeatureFamily, featurize, featurize_all
from stancekit.harvest import (
    BalanceConfig,
    SeedRule,
    SeedRuleSet,
    balance_classes,
    filter_duplicates,
    filter_min_dictionary,
    harvest_topic,
    load_ruleset,
    weak_label,
)
from stancekit.model import NbModel, predict, train_nb
from stancekit.normalize import Normalizer, squeeze_repeats, tokenize
from stancekit.resources import FeatureResources, load_resources
from stancekit.types import (
    LABEL_ORDER,
    DepArc,
    FeatureVector,
    ParsedTweet,
    StanceLabel,
    Token,
    Tweet,
    TweetSource,
)

__version__ = "0.1.0"

__all__ = [
    # Data
    "Tweet",
    "TweetSource",
    "StanceLabel",
    "LABEL_ORDER",
    "Token",
    "DepArc",
    "ParsedTweet",
    "FeatureVector",
    # Corpus I/O
    "load_tweets",
    "save_tweets",
    "load_parses",
    "save_parses",
    "attach_parses",
    "load_corpus",
    "load_topic_documents",
    # Harvesting
    "SeedRule",
    "SeedRuleSet",
    "BalanceConfig",
    "load_ruleset",
    "weak_label",
    "filter_duplicates",
    "filter_min_dictionary",
    "balance_classes",
    "harvest_topic",
    # Normalization
    "Normalizer",
    "tokenize",
    "squeeze_repeats",
    # Features
    "FeatureConfig",
    "FeatureFamily",
    "FeatureResources",
    "load_resources",
    "featurize",
    "featurize_all",
    # Model
    "NbModel",
    "train_nb",
    "predict",
    # Evaluation
    "EvalReport",
    "ModelSpec",
    "evaluate",
    "train_and_evaluate",
    "run_ablation",
    "learning_curve",
    "run_sweep",
    # Errors
    "StanceKitError",
    "CorpusFormatError",
    "LexiconFormatError",
    "ResourceError",
    "ConfigError",
    "InsufficientDataError",
    "ModelFormatError",
]
