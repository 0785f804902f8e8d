"""Domain types for indicator specification cards.

Covers the closed enumerations (data types, analysis tasks, chart idioms),
the goal/question section with its planned data requirements, typed data
tables, axis bindings, and the saved card itself, plus canonical JSON
serialization for all of them.

All types are immutable values; edits produce new values. Canonical JSON is
deterministic: sorted keys, compact separators, UTF-8 text.
"""

from __future__ import annotations

import json
import re
import secrets
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Mapping, Optional, Sequence, Type, TypeVar

from .errors import ModelError, Violation, prefixed

E = TypeVar("E", bound=Enum)

ID_RE = re.compile(r"^[0-9a-f]{32}$")

# Decimal grammar for cells: optional sign, digits with an optional single
# decimal point. No exponents, no thousands separators, no locale forms.
NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")


class DataType(str, Enum):
    CATEGORICAL = "categorical"
    NUMERICAL = "numerical"
    CATEGORICAL_ORDERED = "categorical_ordered"

    @property
    def label(self) -> str:
        return _DATA_TYPE_LABELS[self]


_DATA_TYPE_LABELS = {
    DataType.CATEGORICAL: "categorical",
    DataType.NUMERICAL: "numerical",
    DataType.CATEGORICAL_ORDERED: "categorical (ordered)",
}


class TaskType(str, Enum):
    DISTRIBUTION = "distribution"
    TREND = "trend"
    CORRELATION = "correlation"
    COMPARISON = "comparison"
    PART_TO_WHOLE = "part_to_whole"
    RANKING = "ranking"
    DEVIATION = "deviation"

    @property
    def label(self) -> str:
        return self.value.replace("_", "-")


TASK_DESCRIPTIONS = {
    TaskType.DISTRIBUTION: "How values spread across their range, including peaks, gaps, and outliers.",
    TaskType.TREND: "How values change along an ordered dimension such as time or progression.",
    TaskType.CORRELATION: "Whether two measures move together, inversely, or not at all.",
    TaskType.COMPARISON: "How a measure differs across categories or groups.",
    TaskType.PART_TO_WHOLE: "How individual parts contribute to a total.",
    TaskType.RANKING: "Ordering categories from highest to lowest on a measure.",
    TaskType.DEVIATION: "How far values stray from a reference or from each other.",
}


class IdiomType(str, Enum):
    # Definition order is the tie-break order used when ranking recommendations.
    BAR_CHART = "bar_chart"
    GROUPED_BAR_CHART = "grouped_bar_chart"
    STACKED_BAR_CHART = "stacked_bar_chart"
    LINE_CHART = "line_chart"
    AREA_CHART = "area_chart"
    PIE_CHART = "pie_chart"
    DONUT_CHART = "donut_chart"
    SCATTER_PLOT = "scatter_plot"
    HISTOGRAM = "histogram"
    BOX_PLOT = "box_plot"
    HEATMAP = "heatmap"

    @property
    def label(self) -> str:
        return self.value.replace("_", " ")

    @property
    def order(self) -> int:
        return _IDIOM_ORDER[self]


_IDIOM_ORDER = {idiom: i for i, idiom in enumerate(IdiomType)}


def parse_enum(cls: Type[E], raw: object, path: str) -> E:
    if not isinstance(raw, str):
        raise ModelError(
            f"{path}: expected a string", [Violation(path, "expected a string")]
        )
    try:
        return cls(raw)
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        msg = f"unknown value {raw!r}, expected one of: {allowed}"
        raise ModelError(f"{path}: {msg}", [Violation(path, msg)]) from None


# ---------------------------------------------------------------------------
# Cell text helpers


def is_missing(cell: str) -> bool:
    """A cell is missing iff it is the empty string."""
    return cell == ""


def is_numeric_text(cell: str) -> bool:
    """True when the cell (surrounding whitespace ignored) parses as a finite decimal."""
    s = cell.strip()
    return bool(s) and NUMBER_RE.match(s) is not None


def parse_number(cell: str) -> float:
    s = cell.strip()
    if not s or NUMBER_RE.match(s) is None:
        raise ValueError(f"not a decimal number: {cell!r}")
    return float(s)


def non_numeric_rows(values: Sequence[str]) -> list[int]:
    """0-based indices of non-empty cells that fail the decimal grammar."""
    return [
        i for i, v in enumerate(values) if not is_missing(v) and not is_numeric_text(v)
    ]


# ---------------------------------------------------------------------------
# Identifiers and timestamps


def new_id() -> str:
    """128 random bits as lowercase hex."""
    return secrets.token_hex(16)


def now_stamp() -> str:
    """Current UTC time as RFC 3339 text with millisecond precision."""
    return (
        datetime.now(timezone.utc)
        .isoformat(timespec="milliseconds")
        .replace("+00:00", "Z")
    )


def parse_stamp(text: str) -> datetime:
    """Parse RFC 3339 text; rejects naive timestamps."""
    try:
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as exc:
        raise ValueError(f"not an RFC 3339 timestamp: {text!r}") from exc
    if dt.tzinfo is None:
        raise ValueError(f"timestamp lacks a UTC offset: {text!r}")
    return dt


# ---------------------------------------------------------------------------
# Goal/question section


@dataclass(frozen=True)
class DataRequirement:
    """A planned datum: a name and the data type the user expects it to have."""

    name: str
    dtype: DataType

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise ModelError(
                "requirement name must be non-empty",
                [Violation("name", "must be non-empty")],
            )

    def to_dict(self) -> dict:
        return {"name": self.name, "dtype": self.dtype.value}


@dataclass(frozen=True)
class GoalQuestion:
    """The goal/question section: goal, question, optional idea, planned data.

    Deliberately constructible in invalid states; ``validate_goal_question``
    reports violations as data so forms can display them.
    """

    goal: str
    question: str
    idea: str = ""
    requirements: tuple[DataRequirement, ...] = ()

    def to_dict(self) -> dict:
        return {
            "goal": self.goal,
            "question": self.question,
            "idea": self.idea,
            "requirements": [r.to_dict() for r in self.requirements],
        }


def validate_goal_question(gq: GoalQuestion) -> list[Violation]:
    """Empty report iff goal and question are non-empty and there are at least
    two requirements with case-insensitively unique names."""
    report: list[Violation] = []
    if not gq.goal.strip():
        report.append(Violation("goal", "must be non-empty"))
    if not gq.question.strip():
        report.append(Violation("question", "must be non-empty"))
    if len(gq.requirements) < 2:
        report.append(
            Violation(
                "requirements", f"need at least 2, found {len(gq.requirements)}"
            )
        )
    seen: set[str] = set()
    for r in gq.requirements:
        key = r.name.casefold()
        if key in seen:
            report.append(
                Violation("requirements", f"duplicate requirement name '{key}'")
            )
        seen.add(key)
    return report


# ---------------------------------------------------------------------------
# Data signatures


@dataclass(frozen=True)
class DataSignature:
    """Column counts per data type. Absent means zero, so equality is structural."""

    categorical: int = 0
    numerical: int = 0
    categorical_ordered: int = 0

    def __post_init__(self):
        for name in ("categorical", "numerical", "categorical_ordered"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ModelError(
                    f"signature count '{name}' must be a non-negative integer",
                    [Violation(name, "must be a non-negative integer")],
                )

    def count(self, dtype: DataType) -> int:
        return getattr(self, dtype.value)

    def total(self) -> int:
        return self.categorical + self.numerical + self.categorical_ordered

    def describe(self) -> str:
        parts = []
        for dtype in (DataType.CATEGORICAL, DataType.CATEGORICAL_ORDERED, DataType.NUMERICAL):
            n = self.count(dtype)
            if n:
                parts.append(f"{n} {dtype.label}")
        return " + ".join(parts) if parts else "no columns"

    def to_dict(self) -> dict:
        return {
            "categorical": self.categorical,
            "numerical": self.numerical,
            "categorical_ordered": self.categorical_ordered,
        }

    @classmethod
    def from_counts(cls, counts: Mapping[DataType, int]) -> "DataSignature":
        return cls(
            categorical=counts.get(DataType.CATEGORICAL, 0),
            numerical=counts.get(DataType.NUMERICAL, 0),
            categorical_ordered=counts.get(DataType.CATEGORICAL_ORDERED, 0),
        )


def signature_from_dict(raw: object, path: str) -> DataSignature:
    obj = expect_object(
        raw, path, required=set(), optional={"categorical", "numerical", "categorical_ordered"}
    )
    try:
        return DataSignature(
            categorical=expect_int(obj.get("categorical", 0), f"{path}.categorical"),
            numerical=expect_int(obj.get("numerical", 0), f"{path}.numerical"),
            categorical_ordered=expect_int(
                obj.get("categorical_ordered", 0), f"{path}.categorical_ordered"
            ),
        )
    except ModelError as exc:
        raise ModelError(str(exc), prefixed(exc, path)) from None


# ---------------------------------------------------------------------------
# Tables


@dataclass(frozen=True)
class Column:
    """A named, typed column of cell text. Empty cells are missing values."""

    name: str
    dtype: DataType
    values: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise ModelError(
                "column name must be non-empty",
                [Violation("name", "must be non-empty")],
            )
        if any(not isinstance(v, str) for v in self.values):
            raise ModelError(
                "column values must be text",
                [Violation("values", "all cells must be text")],
            )
        if self.dtype is DataType.NUMERICAL:
            bad = non_numeric_rows(self.values)
            if bad:
                msg = f"non-numeric cells at rows {bad}"
                raise ModelError(
                    f"column '{self.name}': {msg}", [Violation("values", msg)]
                )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dtype": self.dtype.value,
            "values": list(self.values),
        }


@dataclass(frozen=True)
class DataTable:
    """A rectangular grid of typed columns; column names are unique ignoring case."""

    columns: tuple[Column, ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for col in self.columns:
            key = col.name.casefold()
            if key in seen:
                msg = f"duplicate column name '{key}'"
                raise ModelError(msg, [Violation("columns", msg)])
            seen.add(key)
        lengths = {len(col.values) for col in self.columns}
        if len(lengths) > 1:
            msg = "columns have unequal lengths"
            raise ModelError(msg, [Violation("columns", msg)])

    @property
    def row_count(self) -> int:
        return len(self.columns[0].values) if self.columns else 0

    def column(self, name: str) -> Optional[Column]:
        for col in self.columns:
            if col.name == name:
                return col
        return None

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def rows(self) -> list[tuple[str, ...]]:
        return [
            tuple(col.values[i] for col in self.columns)
            for i in range(self.row_count)
        ]

    def to_dict(self) -> dict:
        return {
            "columns": [c.to_dict() for c in self.columns],
            "row_count": self.row_count,
        }


# ---------------------------------------------------------------------------
# Axis bindings


@dataclass(frozen=True)
class Labels:
    title: str = ""
    x_label: str = ""
    y_label: str = ""

    def to_dict(self) -> dict:
        return {"title": self.title, "x_label": self.x_label, "y_label": self.y_label}


@dataclass(frozen=True)
class AxisBinding:
    """Assignment of table columns to the x and y channels, plus display labels."""

    x_column: str
    y_columns: tuple[str, ...]
    labels: Labels = Labels()

    def __post_init__(self):
        if not isinstance(self.x_column, str) or not self.x_column:
            raise ModelError(
                "x_column must be non-empty",
                [Violation("x_column", "must be non-empty")],
            )
        if not self.y_columns:
            raise ModelError(
                "y_columns must be non-empty",
                [Violation("y_columns", "must be non-empty")],
            )

    def to_dict(self) -> dict:
        return {
            "x_column": self.x_column,
            "y_columns": list(self.y_columns),
            "labels": self.labels.to_dict(),
        }


def binding_column_violations(binding: AxisBinding, table: DataTable) -> list[Violation]:
    """Existence check only; channel-type checks live in the recommender."""
    report: list[Violation] = []
    if table.column(binding.x_column) is None:
        report.append(Violation("binding.x_column", "not in table"))
    for i, name in enumerate(binding.y_columns):
        if table.column(name) is None:
            report.append(Violation(f"binding.y_columns[{i}]", "not in table"))
    return report


# ---------------------------------------------------------------------------
# The card


@dataclass(frozen=True)
class IndicatorSpecificationCard:
    id: str
    name: str
    goal_question: GoalQuestion
    task: Optional[TaskType]
    idiom: IdiomType
    table: DataTable
    binding: AxisBinding
    created_at: str
    updated_at: str
    version: int

    def __post_init__(self):
        problems = card_violations(self)
        if problems:
            raise ModelError(
                "; ".join(f"{v.path}: {v.message}" for v in problems), problems
            )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "goal_question": self.goal_question.to_dict(),
            "task": self.task.value if self.task is not None else None,
            "idiom": self.idiom.value,
            "table": self.table.to_dict(),
            "binding": self.binding.to_dict(),
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "version": self.version,
        }


def card_violations(card: IndicatorSpecificationCard) -> list[Violation]:
    report: list[Violation] = []
    if not ID_RE.match(card.id):
        report.append(Violation("id", "must be 32 lowercase hex characters"))
    if not card.name.strip():
        report.append(Violation("name", "must be non-empty"))
    for v in validate_goal_question(card.goal_question):
        report.append(Violation(f"goal_question.{v.path}", v.message))
    report.extend(binding_column_violations(card.binding, card.table))
    for path, stamp in (("created_at", card.created_at), ("updated_at", card.updated_at)):
        try:
            parse_stamp(stamp)
        except ValueError as exc:
            report.append(Violation(path, str(exc)))
    if not isinstance(card.version, int) or isinstance(card.version, bool) or card.version < 1:
        report.append(Violation("version", "must be a positive integer"))
    return report


# ---------------------------------------------------------------------------
# Canonical JSON


def canonical_json(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def serialize_card(card: IndicatorSpecificationCard) -> str:
    """Deterministic JSON text: equal cards serialize to identical bytes."""
    return canonical_json(card.to_dict())


def parse_card(text: str) -> IndicatorSpecificationCard:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(
            f"malformed JSON: {exc}", [Violation("", f"malformed JSON: {exc}")]
        ) from None
    return card_from_dict(raw)


def card_from_dict(raw: object) -> IndicatorSpecificationCard:
    obj = expect_object(
        raw,
        "",
        required={
            "id",
            "name",
            "goal_question",
            "task",
            "idiom",
            "table",
            "binding",
            "created_at",
            "updated_at",
            "version",
        },
    )
    task_raw = obj["task"]
    task = None if task_raw is None else parse_enum(TaskType, task_raw, "task")
    card = IndicatorSpecificationCard(
        id=expect_str(obj["id"], "id"),
        name=expect_str(obj["name"], "name"),
        goal_question=goal_question_from_dict(obj["goal_question"], "goal_question"),
        task=task,
        idiom=parse_enum(IdiomType, obj["idiom"], "idiom"),
        table=table_from_dict(obj["table"], "table"),
        binding=binding_from_dict(obj["binding"], "binding"),
        created_at=expect_str(obj["created_at"], "created_at"),
        updated_at=expect_str(obj["updated_at"], "updated_at"),
        version=expect_int(obj["version"], "version"),
    )
    return card


def goal_question_from_dict(raw: object, path: str) -> GoalQuestion:
    obj = expect_object(raw, path, required={"goal", "question", "idea", "requirements"})
    reqs = []
    items = expect_list(obj["requirements"], join_path(path, "requirements"))
    for i, item in enumerate(items):
        rp = join_path(path, f"requirements[{i}]")
        entry = expect_object(item, rp, required={"name", "dtype"})
        try:
            reqs.append(
                DataRequirement(
                    name=expect_str(entry["name"], f"{rp}.name"),
                    dtype=parse_enum(DataType, entry["dtype"], f"{rp}.dtype"),
                )
            )
        except ModelError as exc:
            raise ModelError(str(exc), prefixed(exc, rp)) from None
    return GoalQuestion(
        goal=expect_str(obj["goal"], join_path(path, "goal"), allow_empty=True),
        question=expect_str(obj["question"], join_path(path, "question"), allow_empty=True),
        idea=expect_str(obj["idea"], join_path(path, "idea"), allow_empty=True),
        requirements=tuple(reqs),
    )


def table_from_dict(raw: object, path: str) -> DataTable:
    obj = expect_object(raw, path, required={"columns", "row_count"})
    cols = []
    items = expect_list(obj["columns"], join_path(path, "columns"))
    for i, item in enumerate(items):
        cp = join_path(path, f"columns[{i}]")
        entry = expect_object(item, cp, required={"name", "dtype", "values"})
        values = expect_list(entry["values"], f"{cp}.values")
        cells = tuple(
            expect_str(v, f"{cp}.values[{j}]", allow_empty=True)
            for j, v in enumerate(values)
        )
        try:
            cols.append(
                Column(
                    name=expect_str(entry["name"], f"{cp}.name"),
                    dtype=parse_enum(DataType, entry["dtype"], f"{cp}.dtype"),
                    values=cells,
                )
            )
        except ModelError as exc:
            raise ModelError(str(exc), prefixed(exc, cp)) from None
    try:
        table = DataTable(columns=tuple(cols))
    except ModelError as exc:
        raise ModelError(str(exc), prefixed(exc, path)) from None
    rc_path = join_path(path, "row_count")
    declared = expect_int(obj["row_count"], rc_path)
    if declared != table.row_count:
        msg = f"row_count is {declared} but columns have {table.row_count} rows"
        raise ModelError(f"{rc_path}: {msg}", [Violation(rc_path, msg)])
    return table


def binding_from_dict(raw: object, path: str) -> AxisBinding:
    obj = expect_object(raw, path, required={"x_column", "y_columns", "labels"})
    labels_path = join_path(path, "labels")
    labels_obj = expect_object(obj["labels"], labels_path, required={"title", "x_label", "y_label"})
    y_items = expect_list(obj["y_columns"], join_path(path, "y_columns"))
    try:
        return AxisBinding(
            x_column=expect_str(obj["x_column"], join_path(path, "x_column")),
            y_columns=tuple(
                expect_str(v, join_path(path, f"y_columns[{i}]"))
                for i, v in enumerate(y_items)
            ),
            labels=Labels(
                title=expect_str(labels_obj["title"], f"{labels_path}.title", allow_empty=True),
                x_label=expect_str(labels_obj["x_label"], f"{labels_path}.x_label", allow_empty=True),
                y_label=expect_str(labels_obj["y_label"], f"{labels_path}.y_label", allow_empty=True),
            ),
        )
    except ModelError as exc:
        raise ModelError(str(exc), prefixed(exc, path)) from None


# ---------------------------------------------------------------------------
# Strict JSON shape helpers


def join_path(prefix: str, key: str) -> str:
    return f"{prefix}.{key}" if prefix else key


def expect_object(
    raw: object, path: str, required: set[str], optional: set[str] = frozenset()
) -> dict:
    label = path or "document"
    if not isinstance(raw, dict):
        msg = f"expected an object, got {type(raw).__name__}"
        raise ModelError(f"{label}: {msg}", [Violation(path, msg)])
    missing = sorted(required - raw.keys())
    if missing:
        msg = f"missing fields: {missing}"
        raise ModelError(f"{label}: {msg}", [Violation(path, msg)])
    unknown = sorted(k for k in raw if k not in required and k not in optional)
    if unknown:
        msg = f"unexpected fields: {unknown}"
        raise ModelError(f"{label}: {msg}", [Violation(path, msg)])
    return raw


def expect_str(raw: object, path: str, allow_empty: bool = False) -> str:
    if not isinstance(raw, str):
        msg = f"expected a string, got {type(raw).__name__}"
        raise ModelError(f"{path}: {msg}", [Violation(path, msg)])
    if not allow_empty and not raw:
        msg = "must be non-empty"
        raise ModelError(f"{path}: {msg}", [Violation(path, msg)])
    return raw


def expect_int(raw: object, path: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        msg = f"expected an integer, got {type(raw).__name__}"
        raise ModelError(f"{path}: {msg}", [Violation(path, msg)])
    return raw


def expect_list(raw: object, path: str) -> list:
    if not isinstance(raw, list):
        msg = f"expected a list, got {type(raw).__name__}"
        raise ModelError(f"{path}: {msg}", [Violation(path, msg)])
    return raw
