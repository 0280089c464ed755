"""Command-line interface: ``stancekit <command> --config ... --topic ...``."""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from stancekit.config import StanceKitConfig, TopicRunConfig, load_config
from stancekit.corpus_io import (
    attach_parses,
    load_parses,
    load_topic_documents,
    load_tweets,
    save_parses,
    save_tweets,
)
from stancekit.evaluation import (
    EvalReport,
    ModelSpec,
    ReportRow,
    evaluate,
    fit_vectors,
    learning_curve,
    load_predictions,
    run_ablation,
    run_sweep,
    save_predictions,
    stemming_variants,
    write_curve_csv,
    write_report_csv,
)
from stancekit.exceptions import ConfigError, InsufficientDataError, StanceKitError
from stancekit.features import (
    FeatureFamily,
    build_pmi_model,
    featurize_all,
    load_features,
    load_pmi_model,
    parse_families,
    save_features,
    save_pmi_model,
)
from stancekit.features.families import NGRAM_FAMILIES, PMI_FAMILIES
from stancekit.features.pmi import document_tokens
from stancekit.harvest import (
    BalanceConfig,
    filter_duplicates,
    filter_min_dictionary,
    harvest_topic,
    load_ruleset,
    rule_report,
)
from stancekit.lexicons import load_word_list
from stancekit.manifest import write_manifest
from stancekit.model import load_model, predict_all, save_model
from stancekit.resources import FeatureResources, load_resources
from stancekit.settings import StanceKitSettings
from stancekit.types import LABEL_ORDER, ParsedTweet

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="stancekit",
    help="Semi-supervised stance classification for tweets.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console()

ConfigOption = Annotated[Path, typer.Option("--config", "-c", help="TOML run configuration.")]
TopicOption = Annotated[str, typer.Option("--topic", "-t", help="Topic table to use.")]
OutDirOption = Annotated[Path, typer.Option("--out-dir", "-o", help="Directory for outputs.")]
SeedOption = Annotated[int | None, typer.Option("--seed", help="Override the configured seed.")]
StripOption = Annotated[
    bool,
    typer.Option(
        "--strip-hashtags",
        help="Remove hashtags from train and test; otherwise the topic setting applies.",
    ),
]
FamiliesOption = Annotated[
    list[str] | None,
    typer.Option(
        "--families",
        "-f",
        help="Comma-separated feature families; repeat for several configurations.",
    ),
]
NameOption = Annotated[str | None, typer.Option(help="Output name; defaults to the input stem.")]
PmiOption = Annotated[
    Path | None, typer.Option("--pmi-model", help="Saved PMI model; built on the fly if absent.")
]


@app.callback()
def main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log at DEBUG level.")] = False,
) -> None:
    """Configure logging for every command."""
    settings = StanceKitSettings()
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.log_level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@contextmanager
def _reporting_errors() -> Iterator[None]:
    """Turn library errors into one ``error: <Class>: <message>`` line and exit code 2."""
    try:
        yield
    except (StanceKitError, ValidationError, ValueError, FileNotFoundError) as e:
        message = " ".join(str(e).split())
        typer.echo(f"error: {type(e).__name__}: {message}", err=True)
        raise typer.Exit(code=2) from e


def _argv() -> list[str]:
    """The invoking command and its parameters, in a stable order."""
    ctx = click.get_current_context()
    argv = [ctx.info_name or ""]
    for name, value in sorted(ctx.params.items()):
        if value is None:
            continue
        values = value if isinstance(value, list | tuple) else [value]
        argv.extend(f"--{name.replace('_', '-')}={item}" for item in values)
    return argv


def _threads() -> int:
    return StanceKitSettings().threads


def _topic(
    config: Path, topic: str, strip_hashtags: bool | None = None, seed: int | None = None
) -> tuple[StanceKitConfig, TopicRunConfig]:
    cfg = load_config(config)
    return cfg, cfg.topic(topic, strip_hashtags=strip_hashtags, seed=seed)


def _out(out_dir: Path, name: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / name


def _family_sets(values: Sequence[str] | None) -> list[tuple[str, frozenset[FeatureFamily]]]:
    sets = []
    for value in values or []:
        names = [part for part in value.split(",") if part.strip()]
        sets.append(("+".join(n.strip() for n in names), parse_families(names)))
    return sets


def _resources(
    run: TopicRunConfig, families: frozenset[FeatureFamily], pmi_model: Path | None
) -> FeatureResources:
    """Load the configured lexicons and, for PMI families, the topic's PMI model."""
    paths = run.resources
    resources = load_resources(
        categories=paths.categories,
        scored=paths.scored,
        positive=paths.positive,
        negative=paths.negative,
        dictionary=paths.dictionary,
        normalization=paths.normalization,
    )
    if not families & PMI_FAMILIES:
        return resources
    if pmi_model is not None:
        return resources.with_pmi_model(load_pmi_model(pmi_model))
    if paths.pmi_corpus is not None:
        documents = [
            (topic, document_tokens(text, resources.normalizer))
            for topic, text in load_topic_documents(paths.pmi_corpus)
        ]
        model = build_pmi_model(documents, run.topic, run.top_percent, run.min_df)
        return resources.with_pmi_model(model)
    return resources


def _corpus(
    tweets: Path, parses: Path | None, run: TopicRunConfig, resources: FeatureResources
) -> list[ParsedTweet]:
    parses = parses or run.resources.parses
    entries = load_parses(parses) if parses is not None else {}
    return attach_parses(load_tweets(tweets), entries, resources.normalizer)


def _print_reports(title: str, rows: Sequence[tuple[str, EvalReport]]) -> None:
    table = Table(title=title)
    table.add_column("config")
    for label in LABEL_ORDER:
        table.add_column(f"{label.value} F1", justify="right")
    table.add_column("avg F", justify="right")
    for name, report in rows:
        table.add_row(
            name,
            *(f"{report.f1(label):.4f}" for label in LABEL_ORDER),
            f"{report.semeval_avg:.4f}",
        )
    console.print(table)


@app.command()
def harvest(
    config: ConfigOption,
    topic: TopicOption,
    tweets: Annotated[Path, typer.Option(help="Harvested tweets (JSONL), any topics.")],
    pool: Annotated[
        list[Path] | None, typer.Option(help="Extra NONE pool files, e.g. random tweets.")
    ] = None,
    out_dir: OutDirOption = Path("."),
    seed: SeedOption = None,
) -> None:
    """Weak-label, filter and balance a topic's training set."""
    with _reporting_errors():
        cfg, run = _topic(config, topic, seed=seed)
        if run.resources.rules is None or run.resources.dictionary is None:
            raise ConfigError("harvest needs resources.rules and resources.dictionary")
        ruleset = load_ruleset(run.resources.rules)
        dictionary = load_word_list(run.resources.dictionary)

        everything = load_tweets(tweets)
        own = [t for t in everything if t.topic == topic]
        others = [t for t in everything if t.topic != topic]
        for path in pool or []:
            others.extend(load_tweets(path))

        labeled = harvest_topic(
            own,
            ruleset,
            dictionary,
            others,
            BalanceConfig(per_class_cap=run.per_class_cap, rng_seed=run.seed),
        )
        corpus_path = _out(out_dir, f"{topic}.train.jsonl")
        save_tweets((tweet for tweet, _ in labeled), corpus_path)

        report_path = _out(out_dir, f"{topic}.rules.tsv")
        with report_path.open("w", encoding="utf-8") as handle:
            handle.write("rule\tstance\tmatches\tsample_ids\n")
            for item in rule_report(own, ruleset):
                if item.rule.topic != topic:
                    continue
                samples = ",".join(t.id for t in item.samples)
                stance = item.rule.stance.value
                handle.write(f"{item.rule.name}\t{stance}\t{item.matches}\t{samples}\n")

        inputs = {
            "tweets": tweets,
            "rules": run.resources.rules,
            "dictionary": run.resources.dictionary,
            **{f"pool{i}": p for i, p in enumerate(pool or [])},
        }
        for output in (corpus_path, report_path):
            write_manifest(output, "harvest", _argv(), inputs, run.seed, cfg.digest())
        console.print(f"{topic}: {len(labeled)} tweets -> {corpus_path}")


@app.command()
def preprocess(
    config: ConfigOption,
    topic: TopicOption,
    tweets: Annotated[Path, typer.Option(help="Tweets (JSONL).")],
    parses: Annotated[Path | None, typer.Option(help="Parse file for these tweets.")] = None,
    name: NameOption = None,
    filters: Annotated[
        bool, typer.Option("--filters/--no-filters", help="Apply duplicate and dictionary filters.")
    ] = True,
    out_dir: OutDirOption = Path("."),
) -> None:
    """Filter, normalize and attach parses (fallback parse where none exists)."""
    with _reporting_errors():
        cfg, run = _topic(config, topic)
        resources = _resources(run, frozenset(), None)
        records = load_tweets(tweets)
        if filters:
            records = filter_duplicates(records)
            if resources.normalizer.dictionary:
                records = filter_min_dictionary(records, resources.normalizer.dictionary)
        parse_path = parses or run.resources.parses
        entries = load_parses(parse_path) if parse_path is not None else {}
        parsed = attach_parses(records, entries, resources.normalizer)

        stem = name or tweets.name.removesuffix(".jsonl")
        tweets_out = _out(out_dir, f"{stem}.jsonl")
        parses_out = _out(out_dir, f"{stem}.parses.tsv")
        save_tweets(records, tweets_out)
        save_parses(parsed, parses_out)
        inputs = {"tweets": tweets, "parses": parse_path}
        for output in (tweets_out, parses_out):
            write_manifest(output, "preprocess", _argv(), inputs, run.seed, cfg.digest())
        console.print(f"{len(parsed)} tweets -> {parses_out}")


@app.command("pmi-build")
def pmi_build(
    config: ConfigOption,
    topic: TopicOption,
    corpus: Annotated[
        Path | None, typer.Option(help="Topic-labeled documents; defaults to resources.pmi_corpus.")
    ] = None,
    out_dir: OutDirOption = Path("."),
) -> None:
    """Build the nPMI table and top-N% pool of a topic."""
    with _reporting_errors():
        cfg, run = _topic(config, topic)
        corpus = corpus or run.resources.pmi_corpus
        if corpus is None:
            raise ConfigError("pmi-build needs --corpus or resources.pmi_corpus")
        resources = _resources(run, frozenset(), None)
        documents = [
            (doc_topic, document_tokens(text, resources.normalizer))
            for doc_topic, text in load_topic_documents(corpus)
        ]
        model = build_pmi_model(documents, topic, run.top_percent, run.min_df)
        output = _out(out_dir, f"{topic}.pmi.tsv")
        save_pmi_model(model, output)
        write_manifest(output, "pmi-build", _argv(), {"corpus": corpus}, run.seed, cfg.digest())
        console.print(f"{topic}: {len(model.table)} n-grams, {len(model.pool)} pooled -> {output}")


@app.command()
def featurize(
    config: ConfigOption,
    topic: TopicOption,
    tweets: Annotated[Path, typer.Option(help="Tweets (JSONL).")],
    parses: Annotated[Path | None, typer.Option(help="Parse file for these tweets.")] = None,
    families: FamiliesOption = None,
    pmi_model: PmiOption = None,
    strip_hashtags: StripOption = False,
    name: NameOption = None,
    out_dir: OutDirOption = Path("."),
) -> None:
    """Write one feature vector per tweet."""
    with _reporting_errors():
        cfg, run = _topic(config, topic, strip_hashtags=strip_hashtags or None)
        chosen = frozenset().union(*(f for _, f in _family_sets(families))) or run.families
        feature_cfg = run.feature_config(chosen)
        resources = _resources(run, chosen, pmi_model)
        corpus = _corpus(tweets, parses, run, resources)
        vectors = featurize_all(corpus, feature_cfg, resources, _threads())

        output = _out(out_dir, f"{name or tweets.name.removesuffix('.jsonl')}.features.tsv")
        save_features(
            (
                (item.tweet.id, item.tweet.gold_stance, fv)
                for item, fv in zip(corpus, vectors, strict=True)
            ),
            output,
        )
        inputs = {"tweets": tweets, "parses": parses or run.resources.parses, "pmi": pmi_model}
        write_manifest(output, "featurize", _argv(), inputs, run.seed, cfg.digest())
        console.print(f"{len(vectors)} vectors ({feature_cfg.name}) -> {output}")


@app.command()
def train(
    config: ConfigOption,
    topic: TopicOption,
    features: Annotated[Path, typer.Option(help="Labeled feature file.")],
    out_dir: OutDirOption = Path("."),
) -> None:
    """Select features and train the topic's Naive Bayes model."""
    with _reporting_errors():
        cfg, run = _topic(config, topic)
        rows = load_features(features)
        unlabeled = [tweet_id for tweet_id, label, _ in rows if label is None]
        if unlabeled:
            raise InsufficientDataError(f"{len(unlabeled)} training rows have no label")
        labels = [label for _, label, _ in rows if label is not None]
        fitted = fit_vectors([fv for _, _, fv in rows], labels, run.model_spec())

        output = _out(out_dir, f"{topic}.model.tsv")
        save_model(fitted.model, output)
        write_manifest(output, "train", _argv(), {"features": features}, run.seed, cfg.digest())
        if fitted.selection is not None:
            ranking = _out(out_dir, f"{topic}.selection.tsv")
            with ranking.open("w", encoding="utf-8") as handle:
                for feature, score in fitted.selection.ranked[: fitted.selection.k]:
                    handle.write(f"{feature}\t{score:.17g}\n")
            write_manifest(
                ranking, "train", _argv(), {"features": features}, run.seed, cfg.digest()
            )
        console.print(f"{topic}: {len(fitted.model.vocabulary)} features -> {output}")


@app.command()
def predict(
    model: Annotated[Path, typer.Option(help="Saved model.")],
    features: Annotated[Path, typer.Option(help="Feature file to classify.")],
    name: NameOption = None,
    out_dir: OutDirOption = Path("."),
) -> None:
    """Classify a feature file with a saved model."""
    with _reporting_errors():
        nb = load_model(model)
        rows = load_features(features)
        labels = predict_all(nb, [fv for _, _, fv in rows])
        stem = name or features.name.removesuffix(".tsv").removesuffix(".features")
        output = _out(out_dir, f"{stem}.predictions.tsv")
        save_predictions(
            (
                (tweet_id, label, gold)
                for (tweet_id, gold, _), label in zip(rows, labels, strict=True)
            ),
            output,
        )
        write_manifest(output, "predict", _argv(), {"model": model, "features": features})
        console.print(f"{len(labels)} predictions -> {output}")


@app.command("evaluate")
def evaluate_command(
    predictions: Annotated[Path, typer.Option(help="Prediction/gold pair file.")],
    topic: Annotated[str, typer.Option("--topic", "-t")] = "",
    name: Annotated[str, typer.Option(help="config_name column value.")] = "model",
    train_size: Annotated[int, typer.Option(help="train_size column value.")] = 0,
    seed: Annotated[int, typer.Option(help="seed column value.")] = 0,
    strip_hashtags: Annotated[bool, typer.Option("--strip-hashtags/--keep-hashtags")] = False,
    out_dir: OutDirOption = Path("."),
) -> None:
    """Score a prediction file and write a one-row report CSV."""
    with _reporting_errors():
        rows = load_predictions(predictions)
        missing = [tweet_id for tweet_id, _, gold in rows if gold is None]
        if missing:
            raise InsufficientDataError(f"{len(missing)} predictions have no gold label")
        gold = [g for _, _, g in rows if g is not None]
        report = evaluate([p for _, p, _ in rows], gold)
        output = _out(out_dir, f"{name}.report.csv")
        write_report_csv([ReportRow(topic, name, report, train_size, seed, strip_hashtags)], output)
        write_manifest(output, "evaluate", _argv(), {"predictions": predictions}, seed)
        _print_reports(topic or name, [(name, report)])


def _split_options(
    train: Path, train_parses: Path | None, test: Path, test_parses: Path | None
) -> dict[str, Path | None]:
    return {"train": train, "train_parses": train_parses, "test": test, "test_parses": test_parses}


TrainOption = Annotated[Path, typer.Option(help="Training tweets (JSONL).")]
TrainParsesOption = Annotated[Path | None, typer.Option(help="Parse file for the training tweets.")]
TestParsesOption = Annotated[Path | None, typer.Option(help="Parse file for the test tweets.")]


@app.command()
def ablate(
    config: ConfigOption,
    topic: TopicOption,
    train: TrainOption,
    test: Annotated[Path, typer.Option(help="Test tweets (JSONL).")],
    train_parses: TrainParsesOption = None,
    test_parses: TestParsesOption = None,
    families: FamiliesOption = None,
    pmi_model: PmiOption = None,
    strip_hashtags: StripOption = False,
    seed: SeedOption = None,
    out_dir: OutDirOption = Path("."),
) -> None:
    """One train/evaluate cycle per feature-family subset."""
    with _reporting_errors():
        cfg, run = _topic(config, topic, strip_hashtags=strip_hashtags or None, seed=seed)
        subsets = _family_sets(families) or run.ablation_subsets()
        resources = _resources(run, frozenset().union(*(f for _, f in subsets)), pmi_model)
        train_corpus = _corpus(train, train_parses, run, resources)
        test_corpus = _corpus(test, test_parses, run, resources)
        rows = run_ablation(
            train_corpus, test_corpus, run.model_spec(), subsets, resources, _threads()
        )

        suffix = ".nohashtags" if run.strip_hashtags else ""
        output = _out(out_dir, f"{topic}.ablation{suffix}.csv")
        write_report_csv(
            [
                ReportRow(
                    topic, row.name, row.report, len(train_corpus), run.seed, run.strip_hashtags
                )
                for row in rows
            ],
            output,
        )
        inputs = {**_split_options(train, train_parses, test, test_parses), "pmi": pmi_model}
        write_manifest(output, "ablate", _argv(), inputs, run.seed, cfg.digest())
        _print_reports(f"{topic} ablation", [(row.name, row.report) for row in rows])


def _parse_sizes(value: str) -> list[int]:
    try:
        return [int(part) for part in value.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"--sizes must be comma-separated integers, got {value!r}") from e


@app.command()
def curve(
    config: ConfigOption,
    topic: TopicOption,
    train: TrainOption,
    test: Annotated[Path, typer.Option(help="Test tweets (JSONL).")],
    sizes: Annotated[str, typer.Option(help="Comma-separated training sizes, increasing.")],
    train_parses: TrainParsesOption = None,
    test_parses: TestParsesOption = None,
    families: FamiliesOption = None,
    pmi_model: PmiOption = None,
    strip_hashtags: StripOption = False,
    seed: SeedOption = None,
    out_dir: OutDirOption = Path("."),
) -> None:
    """Learning curves over nested training subsamples.

    Without ``--families`` the curves are a unigram baseline, a dependency
    baseline and the topic's configured model.
    """
    with _reporting_errors():
        cfg, run = _topic(config, topic, strip_hashtags=strip_hashtags or None, seed=seed)
        subsets = _family_sets(families)
        if subsets:
            specs = [run.model_spec(name, fams) for name, fams in subsets]
        else:
            specs = [
                run.model_spec("unigram", frozenset({FeatureFamily.UNIGRAM})),
                run.model_spec("dep", frozenset({FeatureFamily.DEP})),
                run.model_spec(topic),
            ]
        needed = frozenset().union(*(spec.features.families for spec in specs))
        resources = _resources(run, needed, pmi_model)
        points = learning_curve(
            _corpus(train, train_parses, run, resources),
            _corpus(test, test_parses, run, resources),
            specs,
            _parse_sizes(sizes),
            run.seed,
            resources,
            _threads(),
        )

        suffix = ".nohashtags" if run.strip_hashtags else ""
        output = _out(out_dir, f"{topic}.curve{suffix}.csv")
        write_curve_csv(topic, points, run.strip_hashtags, output)
        inputs = {**_split_options(train, train_parses, test, test_parses), "pmi": pmi_model}
        write_manifest(output, "curve", _argv(), inputs, run.seed, cfg.digest())
        for point in points:
            scores = ", ".join(f"{n}={v:.4f}" for n, v in point.semeval_avg.items())
            console.print(f"{point.train_size}: {scores}")


def _sweep_candidates(run: TopicRunConfig) -> list[ModelSpec]:
    """The topic model and every ablation row, each with its stemming variants."""
    bases = [run.model_spec()] + [
        run.model_spec(name, fams) for name, fams in run.ablation_subsets()
    ]
    candidates: dict[str, ModelSpec] = {}
    for spec in bases:
        variants = stemming_variants(spec) if spec.features.families & NGRAM_FAMILIES else [spec]
        for variant in variants:
            candidates.setdefault(variant.name, variant)
    return list(candidates.values())


@app.command()
def sweep(
    config: ConfigOption,
    topic: TopicOption,
    train: TrainOption,
    dev: Annotated[Path, typer.Option(help="Development tweets (JSONL).")],
    train_parses: TrainParsesOption = None,
    dev_parses: Annotated[Path | None, typer.Option(help="Parse file for the dev tweets.")] = None,
    pmi_model: PmiOption = None,
    strip_hashtags: StripOption = False,
    seed: SeedOption = None,
    out_dir: OutDirOption = Path("."),
) -> None:
    """Score candidate configurations on the dev set and name the best."""
    with _reporting_errors():
        cfg, run = _topic(config, topic, strip_hashtags=strip_hashtags or None, seed=seed)
        candidates = _sweep_candidates(run)
        needed = frozenset().union(*(spec.features.families for spec in candidates))
        resources = _resources(run, needed, pmi_model)
        train_corpus = _corpus(train, train_parses, run, resources)
        result = run_sweep(
            train_corpus,
            _corpus(dev, dev_parses, run, resources),
            candidates,
            resources,
            _threads(),
        )

        output = _out(out_dir, f"{topic}.sweep.csv")
        write_report_csv(
            [
                ReportRow(
                    topic, row.name, row.report, len(train_corpus), run.seed, run.strip_hashtags
                )
                for row in result.rows
            ],
            output,
        )
        inputs = {**_split_options(train, train_parses, dev, dev_parses), "pmi": pmi_model}
        write_manifest(output, "sweep", _argv(), inputs, run.seed, cfg.digest())
        _print_reports(f"{topic} sweep", [(row.name, row.report) for row in result.rows])
        console.print(f"best: {result.best}")


if __name__ == "__main__":
    app()
