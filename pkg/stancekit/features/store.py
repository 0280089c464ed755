"""Feature files: ``tweet_id<TAB>label<TAB>name=value name=value ...``."""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path

from stancekit.exceptions import CorpusFormatError
from stancekit.types import FeatureVector, StanceLabel

UNLABELED = "_"

FeatureRow = tuple[str, StanceLabel | None, FeatureVector]


def format_value(value: float) -> str:
    """Integers without a fraction, everything else with 17 significant digits."""
    return str(int(value)) if float(value).is_integer() else f"{value:.17g}"


def save_features(rows: Iterable[FeatureRow], path: str | Path) -> None:
    """Write feature rows; feature names are sorted for stable output."""
    with Path(path).open("w", encoding="utf-8") as handle:
        for tweet_id, label, vector in rows:
            pairs = " ".join(f"{name}={format_value(vector[name])}" for name in sorted(vector))
            handle.write(f"{tweet_id}\t{label.value if label else UNLABELED}\t{pairs}\n")


def load_features(path: str | Path) -> list[FeatureRow]:
    """Read a feature file written by :func:`save_features`."""
    rows: list[FeatureRow] = []
    with Path(path).open(encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            columns = line.split("\t")
            if len(columns) != 3:
                raise CorpusFormatError("expected 3 tab-separated columns", path=path, line=number)
            tweet_id, raw_label, pairs = columns
            try:
                label = None if raw_label == UNLABELED else StanceLabel(raw_label)
            except ValueError as e:
                raise CorpusFormatError(
                    f"unknown label {raw_label!r}", path=path, line=number
                ) from e
            vector: FeatureVector = {}
            for pair in pairs.split(" "):
                if not pair:
                    continue
                name, sep, value = pair.rpartition("=")
                if not sep or not name:
                    raise CorpusFormatError(f"malformed feature {pair!r}", path=path, line=number)
                try:
                    vector[name] = float(value)
                except ValueError as e:
                    raise CorpusFormatError(
                        f"malformed value in {pair!r}", path=path, line=number
                    ) from e
            rows.append((tweet_id, label, vector))
    return rows
