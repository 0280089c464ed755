"""Tests for the command-line interface."""

import csv
import json

import pytest
from typer.testing import CliRunner

from stancekit.cli import app
from stancekit.evaluation import save_predictions
from stancekit.features import load_pmi_model
from stancekit.manifest import read_manifest
from stancekit.types import StanceLabel

from . import synthetic
from .conftest import make_tweet, write_jsonl

runner = CliRunner()

F, A, N = StanceLabel.FAVOR, StanceLabel.AGAINST, StanceLabel.NONE

SYNTH_CONFIG = """\
[defaults]
seed = 3

[ablation]
unigram = ["unigram"]
bigram = ["bigram"]

[topics.synth]
families = ["unigram"]
"""


@pytest.fixture
def synth_run(temp_dir):
    """Config plus synthetic train and test files."""
    train, test = synthetic.train_test()
    config = temp_dir / "run.toml"
    config.write_text(SYNTH_CONFIG)
    return {
        "config": config,
        "train": write_jsonl(temp_dir / "train.jsonl", train),
        "test": write_jsonl(temp_dir / "test.jsonl", test),
        "out": temp_dir / "out",
    }


def _csv(path):
    with path.open(newline="") as handle:
        return list(csv.DictReader(handle))


class TestEvaluateCommand:
    """Tests for ``stancekit evaluate``."""

    def test_writes_report(self, temp_dir):
        """Test the report row and its manifest."""
        gold = [F, F, F, F, A, A, A, A, N, N]
        pred = [F, F, F, A, A, A, N, N, F, N]
        predictions = temp_dir / "p.tsv"
        save_predictions(
            [(str(i), p, g) for i, (p, g) in enumerate(zip(pred, gold, strict=True))], predictions
        )
        out = temp_dir / "out"
        result = runner.invoke(
            app,
            [
                "evaluate",
                "--predictions",
                str(predictions),
                "--topic",
                "hillary",
                "--name",
                "unigram",
                "--out-dir",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        (row,) = _csv(out / "unigram.report.csv")
        assert row["favor_f"] == "0.750000"
        assert row["semeval_avg"] == "0.660714"
        assert row["strip_hashtags"] == "false"
        manifest = read_manifest(out / "unigram.report.csv")
        assert manifest.command == "evaluate"
        assert list(manifest.inputs) == ["predictions:p.tsv"]

    def test_missing_gold(self, temp_dir):
        """Test that predictions without gold labels cannot be scored."""
        predictions = temp_dir / "p.tsv"
        save_predictions([("1", F, None)], predictions)
        result = runner.invoke(app, ["evaluate", "--predictions", str(predictions)])
        assert result.exit_code == 2
        assert "error: InsufficientDataError" in result.output


class TestErrors:
    """Tests for error reporting."""

    def test_missing_config(self, synth_run):
        """Test that a missing config exits with code 2 and names the error."""
        result = runner.invoke(
            app,
            [
                "ablate",
                "--config",
                str(synth_run["config"].with_name("missing.toml")),
                "--topic",
                "synth",
                "--train",
                str(synth_run["train"]),
                "--test",
                str(synth_run["test"]),
            ],
        )
        assert result.exit_code == 2
        assert "error: ConfigError" in result.output

    def test_unknown_topic(self, synth_run):
        """Test that an unconfigured topic is reported."""
        result = runner.invoke(
            app,
            [
                "featurize",
                "--config",
                str(synth_run["config"]),
                "--topic",
                "guns",
                "--tweets",
                str(synth_run["train"]),
            ],
        )
        assert result.exit_code == 2
        assert "unknown topic" in result.output

    def test_bad_curve_sizes(self, synth_run):
        """Test that decreasing curve sizes are a config error with exit code 2."""
        result = runner.invoke(
            app,
            [
                "curve",
                "--config",
                str(synth_run["config"]),
                "--topic",
                "synth",
                "--train",
                str(synth_run["train"]),
                "--test",
                str(synth_run["test"]),
                "--sizes",
                "400,200",
                "--out-dir",
                str(synth_run["out"]),
            ],
        )
        assert result.exit_code == 2
        assert "error: ConfigError: sizes must be positive" in result.output
        assert "Traceback" not in result.output

    def test_empty_seed_rule(self, temp_dir):
        """Test that a rule without terms is reported as a rule-file error."""
        (temp_dir / "rules.toml").write_text('[synth]\nfavor = [[]]\nagainst = [["#no"]]\n')
        (temp_dir / "dictionary.txt").write_text("word\n")
        (temp_dir / "run.toml").write_text(
            '[resources]\nrules = "rules.toml"\ndictionary = "dictionary.txt"\n\n'
            '[topics.synth]\nfamilies = ["unigram"]\n'
        )
        source = write_jsonl(temp_dir / "t.jsonl", [make_tweet("1", "a #no", topic="synth")])
        result = runner.invoke(
            app,
            [
                "harvest",
                "--config",
                str(temp_dir / "run.toml"),
                "--topic",
                "synth",
                "--tweets",
                str(source),
                "--out-dir",
                str(temp_dir / "out"),
            ],
        )
        assert result.exit_code == 2
        assert "error: LexiconFormatError:" in result.output
        assert "non-empty terms" in result.output


class TestAblateCommand:
    """Tests for ``stancekit ablate``."""

    def test_rows_follow_ablation_table(self, synth_run):
        """Test one row per ablation entry, in config order."""
        result = runner.invoke(
            app,
            [
                "ablate",
                "--config",
                str(synth_run["config"]),
                "--topic",
                "synth",
                "--train",
                str(synth_run["train"]),
                "--test",
                str(synth_run["test"]),
                "--out-dir",
                str(synth_run["out"]),
            ],
        )
        assert result.exit_code == 0, result.output
        rows = _csv(synth_run["out"] / "synth.ablation.csv")
        assert [row["config_name"] for row in rows] == ["unigram", "bigram"]
        assert all(row["train_size"] == "600" and row["seed"] == "3" for row in rows)
        manifest = read_manifest(synth_run["out"] / "synth.ablation.csv")
        assert manifest.seed == 3
        assert manifest.config_hash is not None
        assert set(manifest.inputs) == {"train:train.jsonl", "test:test.jsonl"}

    def test_strip_hashtags_output_name(self, synth_run):
        """Test that the hashtag-stripping run writes its own file."""
        result = runner.invoke(
            app,
            [
                "ablate",
                "--config",
                str(synth_run["config"]),
                "--topic",
                "synth",
                "--train",
                str(synth_run["train"]),
                "--test",
                str(synth_run["test"]),
                "--families",
                "unigram",
                "--strip-hashtags",
                "--out-dir",
                str(synth_run["out"]),
            ],
        )
        assert result.exit_code == 0, result.output
        (row,) = _csv(synth_run["out"] / "synth.ablation.nohashtags.csv")
        assert row["strip_hashtags"] == "true"


class TestPipelineCommands:
    """Tests for featurize, train and predict chained together."""

    def test_featurize_train_predict(self, synth_run):
        """Test that the file-based pipeline produces predictions for every test tweet."""
        out = synth_run["out"]
        base = ["--config", str(synth_run["config"]), "--topic", "synth"]
        for split in ("train", "test"):
            result = runner.invoke(
                app,
                ["featurize", *base, "--tweets", str(synth_run[split]), "--out-dir", str(out)],
            )
            assert result.exit_code == 0, result.output
        result = runner.invoke(
            app,
            ["train", *base, "--features", str(out / "train.features.tsv"), "--out-dir", str(out)],
        )
        assert result.exit_code == 0, result.output
        result = runner.invoke(
            app,
            [
                "predict",
                "--model",
                str(out / "synth.model.tsv"),
                "--features",
                str(out / "test.features.tsv"),
                "--out-dir",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        lines = (out / "test.predictions.tsv").read_text().splitlines()
        assert len(lines) == 300


class TestHarvestCommand:
    """Tests for ``stancekit harvest``."""

    def test_balanced_output(self, temp_dir):
        """Test weak labeling, filtering, balancing and the rule report."""
        (temp_dir / "rules.toml").write_text(
            '[hillary]\nfavor = [["#imwithher"]]\nagainst = [["#stophillary"]]\n'
        )
        (temp_dir / "dictionary.txt").write_text(
            "\n".join(["i", "think", "she", "will", "win", "lose", "never", "again", "it"])
        )
        (temp_dir / "run.toml").write_text(
            '[resources]\nrules = "rules.toml"\ndictionary = "dictionary.txt"\n\n'
            '[topics.hillary]\nfamilies = ["unigram"]\n'
        )
        tweets = [
            make_tweet("f1", "i think she will win #imwithher"),
            make_tweet("f2", "she will never lose again #imwithher"),
            make_tweet("a1", "i think she will lose #stophillary"),
            make_tweet("a2", "she will never win again #stophillary"),
            make_tweet("a3", "i think she will never win it #stophillary"),
            make_tweet("both", "i think she will win #imwithher #stophillary"),
            make_tweet("c1", "i think it will win again", topic="climate"),
            make_tweet("c2", "she will never lose it", topic="climate"),
        ]
        source = write_jsonl(temp_dir / "harvested.jsonl", tweets)
        out = temp_dir / "out"
        result = runner.invoke(
            app,
            [
                "harvest",
                "--config",
                str(temp_dir / "run.toml"),
                "--topic",
                "hillary",
                "--tweets",
                str(source),
                "--out-dir",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        lines = (out / "hillary.train.jsonl").read_text().splitlines()
        records = [json.loads(line) for line in lines]
        stances = [record["stance"] for record in records]
        assert stances.count("FAVOR") == stances.count("AGAINST") == stances.count("NONE") == 2
        assert all(record["topic"] == "hillary" for record in records)
        assert "both" not in {record["id"] for record in records}
        report = (out / "hillary.rules.tsv").read_text().splitlines()
        assert report[0] == "rule\tstance\tmatches\tsample_ids"
        assert report[2].startswith("#stophillary\tAGAINST\t4\t")


class TestPreprocessCommand:
    """Tests for ``stancekit preprocess``."""

    def test_filters_and_fallback_parses(self, temp_dir):
        """Test that near duplicates are dropped and every kept tweet gets a parse."""
        (temp_dir / "run.toml").write_text(SYNTH_CONFIG)
        source = write_jsonl(
            temp_dir / "raw.jsonl",
            [
                make_tweet("1", "we must act on climate now", topic="synth"),
                make_tweet("2", "We must act on climate NOW!", topic="synth"),
                make_tweet("3", "a completely different tweet here", topic="synth"),
            ],
        )
        out = temp_dir / "out"
        result = runner.invoke(
            app,
            [
                "preprocess",
                "--config",
                str(temp_dir / "run.toml"),
                "--topic",
                "synth",
                "--tweets",
                str(source),
                "--out-dir",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        kept = [json.loads(line)["id"] for line in (out / "raw.jsonl").read_text().splitlines()]
        assert kept == ["1", "3"]
        headers = [
            line
            for line in (out / "raw.parses.tsv").read_text().splitlines()
            if line.startswith("# id=")
        ]
        assert headers == ["# id=1", "# id=3"]
        assert read_manifest(out / "raw.parses.tsv").command == "preprocess"

    def test_no_filters(self, temp_dir):
        """Test that ``--no-filters`` keeps every tweet."""
        (temp_dir / "run.toml").write_text(SYNTH_CONFIG)
        source = write_jsonl(
            temp_dir / "raw.jsonl",
            [
                make_tweet("1", "same words", topic="synth"),
                make_tweet("2", "same words", topic="synth"),
            ],
        )
        result = runner.invoke(
            app,
            [
                "preprocess",
                "--config",
                str(temp_dir / "run.toml"),
                "--topic",
                "synth",
                "--tweets",
                str(source),
                "--no-filters",
                "--name",
                "all",
                "--out-dir",
                str(temp_dir / "out"),
            ],
        )
        assert result.exit_code == 0, result.output
        assert len((temp_dir / "out" / "all.jsonl").read_text().splitlines()) == 2


class TestPmiBuildCommand:
    """Tests for ``stancekit pmi-build``."""

    def test_builds_pool(self, temp_dir):
        """Test the table and the 50% pool of a small topic-labeled collection."""
        (temp_dir / "run.toml").write_text(
            '[defaults]\ntop_percent = 50\n\n[topics.guns]\nfamilies = ["pmi"]\n'
        )
        documents = [
            ("guns", "gun control now"),
            ("guns", "gun control laws"),
            ("guns", "ban guns"),
            ("other", "nice day"),
            ("other", "gun show"),
            ("other", "nice weather"),
        ]
        corpus = temp_dir / "docs.jsonl"
        corpus.write_text(
            "".join(json.dumps({"topic": t, "text": text}) + "\n" for t, text in documents)
        )
        out = temp_dir / "out"
        result = runner.invoke(
            app,
            [
                "pmi-build",
                "--config",
                str(temp_dir / "run.toml"),
                "--topic",
                "guns",
                "--corpus",
                str(corpus),
                "--out-dir",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        model = load_pmi_model(out / "guns.pmi.tsv")
        assert set(model.table) == {"gun", "control", "gun control", "nice"}
        assert model.pool == {"control", "gun control"}
        assert list(read_manifest(out / "guns.pmi.tsv").inputs) == ["corpus:docs.jsonl"]

    def test_needs_corpus(self, synth_run):
        """Test that a missing corpus is a config error."""
        result = runner.invoke(
            app, ["pmi-build", "--config", str(synth_run["config"]), "--topic", "synth"]
        )
        assert result.exit_code == 2
        assert "error: ConfigError" in result.output


class TestSweepCommand:
    """Tests for ``stancekit sweep``."""

    def test_scores_every_candidate(self, synth_run):
        """Test one row per candidate, stemming variants included, and the best name."""
        result = runner.invoke(
            app,
            [
                "sweep",
                "--config",
                str(synth_run["config"]),
                "--topic",
                "synth",
                "--train",
                str(synth_run["train"]),
                "--dev",
                str(synth_run["test"]),
                "--out-dir",
                str(synth_run["out"]),
            ],
        )
        assert result.exit_code == 0, result.output
        rows = _csv(synth_run["out"] / "synth.sweep.csv")
        assert [row["config_name"] for row in rows] == [
            f"{base}{suffix}"
            for base in ("synth", "unigram", "bigram")
            for suffix in ("", "+stem", "+both")
        ]
        best = result.output.split("best: ", 1)[1].split()[0]
        scores = {row["config_name"]: float(row["semeval_avg"]) for row in rows}
        assert scores[best] == max(scores.values())
        assert read_manifest(synth_run["out"] / "synth.sweep.csv").command == "sweep"
