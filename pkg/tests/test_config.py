"""Tests for the TOML run configuration, environment settings and run manifests."""

import hashlib

import pytest
from pydantic import ValidationError

from stancekit import __version__
from stancekit.config import DEFAULT_ABLATION, load_config
from stancekit.exceptions import ConfigError
from stancekit.features import FeatureFamily
from stancekit.manifest import file_digest, manifest_path, read_manifest, write_manifest
from stancekit.model import SelectionMethod
from stancekit.settings import StanceKitSettings

from .conftest import REPO_ROOT

SHIPPED = REPO_ROOT / "configs" / "semeval.toml"


def _write(temp_dir, body: str):
    path = temp_dir / "run.toml"
    path.write_text(body)
    return path


class TestShippedConfig:
    """Tests for the bundled per-topic configuration."""

    def test_loads(self):
        """Test that all five topics resolve."""
        config = load_config(SHIPPED)
        assert sorted(config.topics) == ["abortion", "atheism", "climate", "feminism", "hillary"]
        assert config.resources.categories is not None
        assert config.resources.categories.is_absolute()

    def test_climate_uses_published_family_names(self):
        """Test that aliases resolve to the PMI families and selection applies."""
        run = load_config(SHIPPED).topic("climate")
        assert run.families == frozenset(FeatureFamily) - {FeatureFamily.DEP}
        assert run.selection is SelectionMethod.GAIN_RATIO
        assert run.seed == 13
        assert run.k == 2000

    def test_hillary_unigram_only(self):
        """Test the smallest topic model."""
        spec = load_config(SHIPPED).topic("hillary").model_spec()
        assert spec.name == "hillary"
        assert spec.features.families == {FeatureFamily.UNIGRAM}
        assert spec.selection is SelectionMethod.NONE

    def test_ablation_rows(self):
        """Test that the ablation table keeps its order."""
        subsets = load_config(SHIPPED).topic("atheism").ablation_subsets()
        assert [name for name, _ in subsets] == list(DEFAULT_ABLATION)
        assert subsets[1][1] == {
            FeatureFamily.DEP,
            FeatureFamily.LIWC_DEP,
            FeatureFamily.OPINION_DEP,
        }
        rows = dict(subsets)
        assert rows["pos_dep"] == rows["pos_ngram"] | rows["all_dependencies"]

    def test_digest_is_stable(self):
        """Test that loading twice hashes the same."""
        assert load_config(SHIPPED).digest() == load_config(SHIPPED).digest()


class TestOverrides:
    """Tests for defaults and command-line overrides."""

    def test_defaults_and_overrides(self, temp_dir):
        """Test fallback to [defaults] and explicit overrides."""
        path = _write(
            temp_dir,
            "[defaults]\nseed = 4\nalpha = 0.5\n\n"
            '[topics.x]\nfamilies = ["unigram"]\nk = 7\n',
        )
        config = load_config(path)
        run = config.topic("x")
        assert (run.seed, run.alpha, run.k, run.strip_hashtags) == (4, 0.5, 7, False)
        forced = config.topic("x", strip_hashtags=True, seed=9)
        assert forced.seed == 9
        assert forced.feature_config().strip_hashtags

    def test_digest_changes_with_content(self, temp_dir):
        """Test that different configs hash differently."""
        first = load_config(_write(temp_dir, '[topics.x]\nfamilies = ["unigram"]\n')).digest()
        second = load_config(_write(temp_dir, '[topics.x]\nfamilies = ["bigram"]\n')).digest()
        assert first != second


class TestConfigErrors:
    """Tests for invalid configurations."""

    def test_missing_file(self, temp_dir):
        """Test that a missing config file is a config error."""
        with pytest.raises(ConfigError, match="not found"):
            load_config(temp_dir / "nope.toml")

    def test_bad_toml(self, temp_dir):
        """Test that malformed TOML is a config error."""
        with pytest.raises(ConfigError):
            load_config(_write(temp_dir, "[topics.x\n"))

    def test_unknown_family(self, temp_dir):
        """Test that unknown family names are rejected with their location."""
        with pytest.raises(ConfigError, match="topics.x.families"):
            load_config(_write(temp_dir, '[topics.x]\nfamilies = ["trigram"]\n'))

    def test_unknown_key(self, temp_dir):
        """Test that typos in keys are rejected."""
        with pytest.raises(ConfigError, match="familes"):
            load_config(_write(temp_dir, '[topics.x]\nfamilies = ["unigram"]\nfamiles = []\n'))

    def test_bad_alpha(self, temp_dir):
        """Test that alpha must be positive."""
        with pytest.raises(ConfigError, match="alpha"):
            load_config(
                _write(temp_dir, '[defaults]\nalpha = 0\n[topics.x]\nfamilies = ["unigram"]\n')
            )

    def test_missing_resource(self, temp_dir):
        """Test that referenced files must exist."""
        body = '[resources]\ncategories = "missing.txt"\n[topics.x]\nfamilies = ["liwc"]\n'
        with pytest.raises(ConfigError, match="resources.categories"):
            load_config(_write(temp_dir, body))

    def test_unknown_topic(self):
        """Test that asking for an unconfigured topic fails."""
        with pytest.raises(ConfigError, match="configured"):
            load_config(SHIPPED).topic("guns")


class TestSettings:
    """Tests for environment settings."""

    def test_defaults(self, monkeypatch):
        """Test the built-in defaults."""
        monkeypatch.delenv("STANCEKIT_THREADS", raising=False)
        assert StanceKitSettings().threads == 1

    def test_environment(self, monkeypatch):
        """Test that STANCEKIT_ variables are read."""
        monkeypatch.setenv("STANCEKIT_THREADS", "4")
        monkeypatch.setenv("STANCEKIT_LOG_LEVEL", "DEBUG")
        settings = StanceKitSettings()
        assert (settings.threads, settings.log_level) == (4, "DEBUG")

    def test_invalid_threads(self, monkeypatch):
        """Test that zero threads is rejected."""
        monkeypatch.setenv("STANCEKIT_THREADS", "0")
        with pytest.raises(ValidationError):
            StanceKitSettings()


class TestManifest:
    """Tests for run manifests."""

    def test_write_and_read(self, temp_dir):
        """Test digests, version and the manifest location."""
        source = temp_dir / "train.jsonl"
        source.write_text("{}\n")
        output = temp_dir / "hillary.model.tsv"
        output.write_text("")
        written = write_manifest(
            output,
            "train",
            ["--topic", "hillary"],
            {"train": source, "parses": None},
            seed=13,
            config_hash="abc",
        )
        assert written == manifest_path(output)
        assert written.name == "hillary.model.tsv.manifest.json"
        manifest = read_manifest(output)
        assert manifest.inputs == {"train:train.jsonl": hashlib.sha256(b"{}\n").hexdigest()}
        assert manifest.inputs["train:train.jsonl"] == file_digest(source)
        assert (manifest.command, manifest.seed, manifest.config_hash) == ("train", 13, "abc")
        assert manifest.stancekit_version == __version__
