"""TOML run configuration: defaults, shared resources, per-topic models and ablation rows."""

from __future__ import annotations

import hashlib
import json
import logging
import tomllib
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from stancekit.evaluation import ModelSpec
from stancekit.exceptions import ConfigError
from stancekit.features import FeatureConfig, FeatureFamily, parse_families
from stancekit.model import SelectionMethod

logger = logging.getLogger(__name__)

# Feature-ablation rows used when the config has no [ablation] table.
DEFAULT_ABLATION: dict[str, list[str]] = {
    "unigram": ["unigram"],
    "all_dependencies": ["dep", "liwc_dep", "opinion_dep"],
    "pos_ngram": ["pos_bigram", "pos_trigram"],
    "pos_dep": ["pos_bigram", "pos_trigram", "dep", "liwc_dep", "opinion_dep"],
    "liwc": ["liwc"],
    "pmi": ["pmi_count", "pmi_max", "pmi_in_topic"],
}


class ResourcePaths(BaseModel):
    """Paths to lexicons and corpora; every field is optional."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    categories: Path | None = None
    scored: Path | None = None
    positive: Path | None = None
    negative: Path | None = None
    normalization: Path | None = None
    dictionary: Path | None = None
    rules: Path | None = None
    pmi_corpus: Path | None = None
    parses: Path | None = None

    def overlay(self, other: ResourcePaths) -> ResourcePaths:
        """Values set in ``other`` win."""
        return self.model_copy(update=other.model_dump(exclude_none=True))

    def resolved(self, base: Path) -> ResourcePaths:
        """Resolve relative paths against ``base`` and check that each exists."""
        updates: dict[str, Path] = {}
        for name, value in self.model_dump(exclude_none=True).items():
            path = value if value.is_absolute() else base / value
            if not path.exists():
                raise ConfigError(f"resources.{name} does not exist: {path}")
            updates[name] = path
        return self.model_copy(update=updates)


class Defaults(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = 0
    alpha: float = Field(default=1.0, gt=0)
    selection: SelectionMethod = SelectionMethod.NONE
    k: int | None = Field(default=None, ge=1)
    top_percent: float = Field(default=10.0, gt=0, le=100)
    min_df: int = Field(default=2, ge=1)
    per_class_cap: int | None = Field(default=None, ge=1)


class TopicSection(BaseModel):
    """One ``[topics.<name>]`` table; unset values fall back to ``[defaults]``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    families: list[str] = Field(min_length=1)
    stemmed: bool = False
    unstemmed: bool = True
    selection: SelectionMethod | None = None
    k: int | None = Field(default=None, ge=1)
    alpha: float | None = Field(default=None, gt=0)
    strip_hashtags: bool = False
    seed: int | None = None
    top_percent: float | None = Field(default=None, gt=0, le=100)
    resources: ResourcePaths = Field(default_factory=ResourcePaths)

    @field_validator("families")
    @classmethod
    def _known_families(cls, value: list[str]) -> list[str]:
        parse_families(value)
        return value


class TopicRunConfig(BaseModel):
    """Fully resolved settings for one topic."""

    model_config = ConfigDict(frozen=True)

    topic: str
    families: frozenset[FeatureFamily]
    use_stemmed: bool = False
    use_unstemmed: bool = True
    selection: SelectionMethod = SelectionMethod.NONE
    k: int | None = None
    alpha: float = 1.0
    strip_hashtags: bool = False
    seed: int = 0
    top_percent: float = 10.0
    min_df: int = 2
    per_class_cap: int | None = None
    resources: ResourcePaths = Field(default_factory=ResourcePaths)
    ablation: dict[str, list[str]] = Field(default_factory=lambda: dict(DEFAULT_ABLATION))

    def feature_config(self, families: frozenset[FeatureFamily] | None = None) -> FeatureConfig:
        return FeatureConfig(
            families=families if families is not None else self.families,
            use_stemmed=self.use_stemmed,
            use_unstemmed=self.use_unstemmed,
            strip_hashtags=self.strip_hashtags,
        )

    def model_spec(
        self, name: str | None = None, families: frozenset[FeatureFamily] | None = None
    ) -> ModelSpec:
        """The classifier this topic trains, optionally with other families."""
        return ModelSpec(
            name=name or self.topic,
            features=self.feature_config(families),
            selection=self.selection,
            k=self.k,
            alpha=self.alpha,
        )

    def ablation_subsets(self) -> list[tuple[str, frozenset[FeatureFamily]]]:
        return [(name, parse_families(names)) for name, names in self.ablation.items()]


class StanceKitConfig(BaseModel):
    """The whole config document."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    defaults: Defaults = Field(default_factory=Defaults)
    resources: ResourcePaths = Field(default_factory=ResourcePaths)
    topics: dict[str, TopicSection] = Field(min_length=1)
    ablation: dict[str, list[str]] = Field(default_factory=lambda: dict(DEFAULT_ABLATION))

    @field_validator("ablation")
    @classmethod
    def _known_ablation_families(cls, value: dict[str, list[str]]) -> dict[str, list[str]]:
        for names in value.values():
            if not parse_families(names):
                raise ValueError("ablation rows need at least one family")
        return value

    def topic(
        self, name: str, *, strip_hashtags: bool | None = None, seed: int | None = None
    ) -> TopicRunConfig:
        """Resolve one topic against the defaults; CLI overrides win.

        Raises:
            ConfigError: The topic is not configured, or its feature options conflict.
        """
        section = self.topics.get(name)
        if section is None:
            configured = ", ".join(sorted(self.topics))
            raise ConfigError(f"unknown topic {name!r}; configured: {configured}")
        if seed is None:
            seed = section.seed if section.seed is not None else self.defaults.seed
        resolved = TopicRunConfig(
            topic=name,
            families=parse_families(section.families),
            use_stemmed=section.stemmed,
            use_unstemmed=section.unstemmed,
            selection=section.selection or self.defaults.selection,
            k=section.k if section.k is not None else self.defaults.k,
            alpha=section.alpha if section.alpha is not None else self.defaults.alpha,
            strip_hashtags=section.strip_hashtags if strip_hashtags is None else strip_hashtags,
            seed=seed,
            top_percent=section.top_percent or self.defaults.top_percent,
            min_df=self.defaults.min_df,
            per_class_cap=self.defaults.per_class_cap,
            resources=self.resources.overlay(section.resources),
            ablation=self.ablation,
        )
        resolved.feature_config()
        return resolved

    def digest(self) -> str:
        """sha256 of the canonical JSON form of the config."""
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _first_error(error: ValidationError) -> str:
    detail = error.errors()[0]
    where = ".".join(str(part) for part in detail["loc"]) or "config"
    return f"{where}: {detail['msg']}"


def load_config(path: str | Path) -> StanceKitConfig:
    """Parse and validate a TOML config; relative paths resolve against its directory.

    Raises:
        ConfigError: Malformed TOML, a schema violation, or a missing referenced file.
    """
    path = Path(path)
    try:
        with path.open("rb") as handle:
            document: dict[str, Any] = tomllib.load(handle)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e

    try:
        config = StanceKitConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(f"{path}: {_first_error(e)}") from e

    base = path.parent
    config = config.model_copy(
        update={
            "resources": config.resources.resolved(base),
            "topics": {
                name: section.model_copy(update={"resources": section.resources.resolved(base)})
                for name, section in config.topics.items()
            },
        }
    )
    logger.debug("loaded config %s with topics %s", path, ", ".join(config.topics))
    return config
