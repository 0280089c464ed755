"""Exception hierarchy for stancekit."""

from __future__ import annotations

from pathlib import Path


class StanceKitError(Exception):
    """Base class for every error raised by stancekit."""


class CorpusFormatError(StanceKitError, ValueError):
    """A tweet or parse file violates its format."""

    def __init__(self, message: str, *, path: str | Path | None = None, line: int | None = None):
        self.path = str(path) if path is not None else None
        self.line = line
        location = ""
        if self.path is not None:
            location = self.path if line is None else f"{self.path}:{line}"
        super().__init__(f"{location}: {message}" if location else message)


class LexiconFormatError(StanceKitError, ValueError):
    """A lexicon, word list or rule file is malformed."""


class ResourceError(StanceKitError, ValueError):
    """A resource required by an enabled feature family is missing."""


class ConfigError(StanceKitError, ValueError):
    """The run configuration is invalid."""


class InsufficientDataError(StanceKitError, ValueError):
    """The data cannot satisfy a request (empty class, small pool, oversize sample)."""


class ModelFormatError(StanceKitError, ValueError):
    """A serialized model file is malformed."""
