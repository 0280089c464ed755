"""Run manifests written next to every CLI output."""

from __future__ import annotations

import hashlib
from collections.abc import Mapping, Sequence
from pathlib import Path

from pydantic import BaseModel, ConfigDict

from stancekit import __version__

MANIFEST_SUFFIX = ".manifest.json"
_CHUNK = 1 << 16


class RunManifest(BaseModel):
    """What produced an output file, enough to run the command again."""

    model_config = ConfigDict(frozen=True)

    command: str
    argv: list[str]
    seed: int | None = None
    config_hash: str | None = None
    inputs: dict[str, str]
    stancekit_version: str = __version__


def file_digest(path: str | Path) -> str:
    """sha256 of a file's bytes."""
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        while chunk := handle.read(_CHUNK):
            digest.update(chunk)
    return digest.hexdigest()


def manifest_path(output: str | Path) -> Path:
    output = Path(output)
    return output.with_name(output.name + MANIFEST_SUFFIX)


def write_manifest(
    output: str | Path,
    command: str,
    argv: Sequence[str],
    inputs: Mapping[str, str | Path | None],
    seed: int | None = None,
    config_hash: str | None = None,
) -> Path:
    """Write ``<output>.manifest.json`` with input digests keyed by their role."""
    manifest = RunManifest(
        command=command,
        argv=list(argv),
        seed=seed,
        config_hash=config_hash,
        inputs={
            f"{role}:{Path(path).name}": file_digest(path)
            for role, path in sorted(inputs.items())
            if path is not None
        },
    )
    target = manifest_path(output)
    target.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return target


def read_manifest(output: str | Path) -> RunManifest:
    return RunManifest.model_validate_json(manifest_path(output).read_text(encoding="utf-8"))
