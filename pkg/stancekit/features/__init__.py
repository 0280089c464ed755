"""Feature extraction for stance classification."""

from stancekit.features.dependencies import dep_features, liwc_dep_features, opinion_dep_features
from stancekit.features.extract import check_resources, featurize, featurize_all
from stancekit.features.families import FeatureConfig, FeatureFamily, parse_families
from stancekit.features.ngrams import (
    category_count_features,
    ngram_features,
    pos_ngram_features,
    stem,
)
from stancekit.features.pmi import (
    PmiModel,
    build_pmi_model,
    load_pmi_model,
    pmi_features,
    save_pmi_model,
)
from stancekit.features.store import load_features, save_features

__all__ = [
    "FeatureConfig",
    "FeatureFamily",
    "parse_families",
    "featurize",
    "featurize_all",
    "check_resources",
    "stem",
    "ngram_features",
    "pos_ngram_features",
    "category_count_features",
    "dep_features",
    "liwc_dep_features",
    "opinion_dep_features",
    "PmiModel",
    "build_pmi_model",
    "pmi_features",
    "save_pmi_model",
    "load_pmi_model",
    "save_features",
    "load_features",
]
