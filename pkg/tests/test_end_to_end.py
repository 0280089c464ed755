"""End-to-end checks on the synthetic corpus."""

import pytest
from typer.testing import CliRunner

from stancekit.cli import app
from stancekit.evaluation import ModelSpec, learning_curve, train_and_evaluate
from stancekit.features import FeatureConfig, FeatureFamily
from stancekit.normalize import Normalizer
from stancekit.resources import FeatureResources

from . import synthetic
from .conftest import write_jsonl

UNIGRAM = FeatureConfig(families=frozenset({FeatureFamily.UNIGRAM}))


@pytest.fixture(scope="module")
def corpus():
    """Fallback-parsed synthetic train and test sets."""
    normalizer = Normalizer()
    train, test = synthetic.train_test()
    return [normalizer.parse(t) for t in train], [normalizer.parse(t) for t in test]


class TestSyntheticCorpus:
    """Tests for classification quality on planted signals."""

    def test_with_hashtags(self, corpus):
        """Test that the planted hashtags make the task nearly perfect."""
        train, test = corpus
        report = train_and_evaluate(train, test, ModelSpec("unigram", UNIGRAM), FeatureResources())
        assert report.semeval_avg >= 0.95

    def test_without_hashtags(self, corpus):
        """Test that the content words alone still carry the stance."""
        train, test = corpus
        spec = ModelSpec("unigram", UNIGRAM).with_strip_hashtags(True)
        report = train_and_evaluate(train, test, spec, FeatureResources())
        assert report.semeval_avg >= 0.70

    def test_learning_curve_improves(self, corpus):
        """Test that the largest sample scores at least as well as the smallest."""
        train, test = corpus
        spec = ModelSpec("unigram", UNIGRAM).with_strip_hashtags(True)
        points = learning_curve(train, test, [spec], [100, 200, 400, 600], 0, FeatureResources())
        assert [p.train_size for p in points] == [100, 200, 400, 600]
        assert points[-1].semeval_avg["unigram"] >= points[0].semeval_avg["unigram"]


class TestDeterminism:
    """Tests for byte-identical outputs across runs."""

    def test_cli_outputs_are_byte_identical(self, temp_dir):
        """Test that two ablation and curve runs write the same CSV bytes."""
        train, test = synthetic.train_test()
        config = temp_dir / "run.toml"
        config.write_text(
            '[defaults]\nseed = 11\n\n[ablation]\nunigram = ["unigram"]\nngram = ["ngram"]\n\n'
            '[topics.synth]\nfamilies = ["unigram", "bigram"]\nselection = "correlation"\nk = 50\n'
        )
        train_path = write_jsonl(temp_dir / "train.jsonl", train)
        test_path = write_jsonl(temp_dir / "test.jsonl", test)
        common = [
            "--config",
            str(config),
            "--topic",
            "synth",
            "--train",
            str(train_path),
            "--test",
            str(test_path),
        ]

        outputs = []
        for run in ("a", "b"):
            out = temp_dir / run
            runner = CliRunner()
            ablate = runner.invoke(app, ["ablate", *common, "--out-dir", str(out)])
            assert ablate.exit_code == 0, ablate.output
            curve = runner.invoke(
                app,
                [
                    "curve",
                    *common,
                    "--sizes",
                    "150,300,600",
                    "--families",
                    "unigram",
                    "--out-dir",
                    str(out),
                ],
            )
            assert curve.exit_code == 0, curve.output
            outputs.append(
                ((out / "synth.ablation.csv").read_bytes(), (out / "synth.curve.csv").read_bytes())
            )

        assert outputs[0] == outputs[1]
        assert len(outputs[0][1].splitlines()) == 4
