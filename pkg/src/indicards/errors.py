"""Structured errors shared across the package.

Every error carries a stable machine-readable ``code`` and a list of
field-level :class:`Violation` details, so the HTTP layer can map any
failure to a ``{code, message, details[]}`` body without inspecting
message strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Violation:
    """One field-level problem: a path into the offending payload plus a message."""

    path: str
    message: str

    def to_dict(self) -> dict:
        return {"path": self.path, "message": self.message}


class IndicardsError(Exception):
    code = "internal"

    def __init__(self, message: str, details: Sequence[Violation] = ()):
        super().__init__(message)
        self.details: list[Violation] = list(details)

    def detail_dicts(self) -> list[dict]:
        return [v.to_dict() for v in self.details]


class ModelError(IndicardsError):
    """Malformed JSON, schema violation, or domain-invariant violation."""

    code = "invalid_model"


class ValidationFailure(IndicardsError):
    """A validation report that blocks an operation (e.g. a bad goal/question)."""

    code = "validation"


class CsvError(IndicardsError):
    """CSV input rejected; details carry row-level messages."""

    code = "csv"


class CsvTooLargeError(IndicardsError):
    code = "too_large"


class EditError(IndicardsError):
    code = "edit"


class StepError(IndicardsError):
    code = "step"


class FinalizeError(IndicardsError):
    code = "finalize"


class UnknownIdiomError(IndicardsError):
    code = "unknown_idiom"


class RulesError(IndicardsError):
    """A rules file failed to load; message names the offending rule index."""

    code = "rules"


class ChartDataError(IndicardsError):
    """Bound table data cannot be turned into a chart (bad number, negative pie slice)."""

    code = "chart_data"


class NotFoundError(IndicardsError):
    code = "not_found"


class DuplicateIdError(IndicardsError):
    code = "duplicate_id"


class VersionConflictError(IndicardsError):
    code = "version_conflict"

    def __init__(self, message: str, current_version: int):
        super().__init__(message)
        self.current_version = current_version


class StorageError(IndicardsError):
    code = "storage"


def prefixed(err: IndicardsError, prefix: str) -> list[Violation]:
    """Re-root an error's violation paths under ``prefix`` (for nested parsing)."""
    out = []
    for v in err.details:
        path = f"{prefix}.{v.path}" if v.path else prefix
        out.append(Violation(path, v.message))
    if not out:
        out.append(Violation(prefix, str(err)))
    return out
