"""Tests for normalized PMI and the PMI-pool features."""

import math

import pytest

from stancekit.exceptions import InsufficientDataError, ModelFormatError
from stancekit.features.pmi import (
    build_pmi_model,
    document_ngrams,
    document_tokens,
    load_pmi_model,
    max_bin,
    pmi_features,
    pool_size,
    save_pmi_model,
)
from stancekit.normalize import Normalizer

from .conftest import make_tweet

DOCUMENTS = [
    ("guns", ["gun", "control", "now"]),
    ("guns", ["gun", "control", "laws"]),
    ("guns", ["ban", "guns"]),
    ("other", ["nice", "day"]),
    ("other", ["gun", "show"]),
    ("other", ["nice", "weather"]),
]


class TestNpmiTable:
    """Tests for the smoothed nPMI table."""

    def test_hand_computed_values(self):
        """Test the table against values computed by hand (D + 1 = 7)."""
        model = build_pmi_model(DOCUMENTS, "guns", top_percent=50)
        assert set(model.table) == {"gun", "control", "gun control", "nice"}
        expected = math.log(7 / 4) / math.log(7 / 3)
        assert model.table["gun control"] == pytest.approx(expected)
        assert model.table["control"] == pytest.approx(expected)
        assert model.table["gun"] == pytest.approx(math.log(21 / 16) / math.log(7 / 3))
        assert model.table["nice"] == pytest.approx(math.log(7 / 12) / math.log(7))

    def test_values_in_range(self):
        """Test that every nPMI lies in [-1, 1]."""
        model = build_pmi_model(DOCUMENTS, "other", top_percent=100, min_df=1)
        assert all(-1.0 <= value <= 1.0 for value in model.table.values())

    def test_pool_is_top_percent_with_lexicographic_ties(self):
        """Test ceil(N%) pooling and tie order."""
        model = build_pmi_model(DOCUMENTS, "guns", top_percent=10)
        assert model.pool == {"control"}
        assert build_pmi_model(DOCUMENTS, "guns", top_percent=50).pool == {
            "control",
            "gun control",
        }

    @pytest.mark.parametrize("top_percent", [10, 50])
    def test_duplicated_corpus_keeps_pool(self, top_percent):
        """Test that doubling every document leaves the table keys and the pool unchanged."""
        once = build_pmi_model(DOCUMENTS, "guns", top_percent=top_percent, min_df=1)
        twice = build_pmi_model(DOCUMENTS * 2, "guns", top_percent=top_percent, min_df=1)
        assert set(twice.table) == set(once.table)
        assert twice.pool == once.pool
        assert {"control", "gun control"} <= once.pool

    def test_pool_size(self):
        """Test the pool-size rounding."""
        assert pool_size(10, 20) == 2
        assert pool_size(10, 21) == 3
        assert pool_size(100, 5) == 5

    def test_single_topic(self):
        """Test that one topic cannot define association."""
        with pytest.raises(InsufficientDataError):
            build_pmi_model(DOCUMENTS[:3], "guns", top_percent=10)

    def test_absent_topic(self):
        """Test that the topic must have documents."""
        with pytest.raises(InsufficientDataError, match="climate"):
            build_pmi_model(DOCUMENTS, "climate", top_percent=10)

    def test_bad_percent(self):
        """Test the top-percent range."""
        with pytest.raises(ValueError):
            build_pmi_model(DOCUMENTS, "guns", top_percent=0)


class TestDocuments:
    """Tests for document tokenization and n-grams."""

    def test_ngrams_up_to_three(self):
        """Test distinct n-grams of orders one to three."""
        assert document_ngrams(["a", "b", "c"]) == {"a", "b", "c", "a b", "b c", "a b c"}
        assert document_ngrams([]) == set()

    def test_tokens_are_normalized(self):
        """Test that documents are normalized like tweets."""
        normalizer = Normalizer(lexicon={"u": "you"})
        assert document_tokens("Sooo U", normalizer) == ["soo", "you"]


class TestPmiFeatures:
    """Tests for the pool count, max bin and in-topic features."""

    def test_features(self):
        """Test all three features for a tweet containing pooled n-grams."""
        model = build_pmi_model(DOCUMENTS, "guns", top_percent=50)
        parsed = Normalizer().parse(make_tweet("t", "Gun control", topic="guns"))
        assert pmi_features(parsed, model) == {
            "pmi:count": 2.0,
            "pmi:max:(0.6,0.7]": 1.0,
            "pmi:intopic": 1.0,
        }

    def test_no_known_ngrams(self):
        """Test that a tweet outside the table has no PMI features."""
        model = build_pmi_model(DOCUMENTS, "guns", top_percent=50)
        parsed = Normalizer().parse(make_tweet("t", "hello there", topic="guns"))
        assert pmi_features(parsed, model) == {}

    def test_max_outside_pool(self):
        """Test that the argmax n-gram may lie outside the pool."""
        model = build_pmi_model(DOCUMENTS, "guns", top_percent=10)
        parsed = Normalizer().parse(make_tweet("t", "nice gun", topic="guns"))
        assert pmi_features(parsed, model) == {"pmi:max:(0.3,0.4]": 1.0}

    @pytest.mark.parametrize(
        ("value", "expected"),
        [
            (1.0, "(0.9,1.0]"),
            (0.3, "(0.2,0.3]"),
            (0.25, "(0.2,0.3]"),
            (0.0, "(-0.1,0.0]"),
            (-0.95, "[-1.0,-0.9]"),
            (-1.0, "[-1.0,-0.9]"),
        ],
    )
    def test_max_bin(self, value, expected):
        """Test bin boundaries."""
        assert max_bin(value) == expected


class TestPmiModelFile:
    """Tests for PMI model files."""

    def test_round_trip(self, temp_dir):
        """Test that the table, pool and header survive."""
        model = build_pmi_model(DOCUMENTS, "guns", top_percent=50)
        path = temp_dir / "guns.pmi.tsv"
        save_pmi_model(model, path)
        loaded = load_pmi_model(path)
        assert loaded == model

    def test_malformed(self, temp_dir):
        """Test that rows need three columns."""
        path = temp_dir / "bad.pmi.tsv"
        path.write_text("# topic=guns\n# top_percent=10.0\ngun\t0.5\n")
        with pytest.raises(ModelFormatError, match=":3:"):
            load_pmi_model(path)
