"""Human-facing artifacts for a saved card: the preview document, the
renderer-agnostic chart specification, and JSON export.

``render_card`` and ``build_chart_spec`` are pure: the same card always
produces identical output, with row and column order preserved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ChartDataError, Violation
from .model import (
    TASK_DESCRIPTIONS,
    DataType,
    IdiomType,
    IndicatorSpecificationCard,
    Labels,
    is_missing,
    parse_number,
    serialize_card,
)

# Rows are embedded in the preview document only up to this size.
MAX_PREVIEW_ROWS = 50

SECTION_HEADINGS = (
    "Goal/Question",
    "Task Abstraction (Why?)",
    "Data Abstraction (What?)",
    "Idiom (How?)",
)


@dataclass(frozen=True)
class Series:
    name: str
    points: tuple[Optional[float], ...]

    def to_dict(self) -> dict:
        return {"name": self.name, "points": list(self.points)}


@dataclass(frozen=True)
class ChartSpec:
    idiom: IdiomType
    categories: tuple[str, ...]
    series: tuple[Series, ...]
    labels: Labels

    def __post_init__(self):
        for s in self.series:
            if len(s.points) != len(self.categories):
                raise ChartDataError(
                    f"series '{s.name}' has {len(s.points)} points for "
                    f"{len(self.categories)} categories"
                )
            for p in s.points:
                if p is not None and not math.isfinite(p):
                    raise ChartDataError(f"series '{s.name}' contains a non-finite value")

    def to_dict(self) -> dict:
        return {
            "idiom": self.idiom.value,
            "categories": list(self.categories),
            "series": [s.to_dict() for s in self.series],
            "labels": self.labels.to_dict(),
        }


@dataclass(frozen=True)
class Section:
    heading: str
    body: str

    def to_dict(self) -> dict:
        return {"heading": self.heading, "body": self.body}


@dataclass(frozen=True)
class CardDocument:
    """The preview page content: four fixed sections plus the chart spec and
    a table summary (full rows only for small tables)."""

    sections: tuple[Section, ...]
    chart_spec: ChartSpec
    table_columns: tuple[tuple[str, DataType], ...]
    row_count: int
    rows: Optional[tuple[tuple[str, ...], ...]]

    def to_dict(self) -> dict:
        return {
            "sections": [s.to_dict() for s in self.sections],
            "chart_spec": self.chart_spec.to_dict(),
            "table": {
                "columns": [
                    {"name": name, "dtype": dtype.value}
                    for name, dtype in self.table_columns
                ],
                "row_count": self.row_count,
                "rows": [list(r) for r in self.rows] if self.rows is not None else None,
            },
        }


def build_chart_spec(card: IndicatorSpecificationCard) -> ChartSpec:
    """Transcribe the bound columns: categories from the x column in row
    order, one series per y column with empty cells as nulls."""
    x_col = card.table.column(card.binding.x_column)
    if x_col is None:
        raise ChartDataError(
            f"bound x column '{card.binding.x_column}' is missing from the table",
            [Violation("binding.x_column", "not in table")],
        )
    series = []
    for name in card.binding.y_columns:
        col = card.table.column(name)
        if col is None:
            raise ChartDataError(
                f"bound y column '{name}' is missing from the table",
                [Violation("binding.y_columns", f"'{name}' not in table")],
            )
        points: list[Optional[float]] = []
        for row, cell in enumerate(col.values):
            if is_missing(cell):
                points.append(None)
                continue
            try:
                points.append(parse_number(cell))
            except ValueError:
                # Unreachable for intact tables; a stored card that fails here
                # indicates corruption.
                raise ChartDataError(
                    f"y column '{name}' row {row}: {cell!r} is not a number",
                    [Violation(f"table.columns.{name}.values[{row}]", "not a decimal number")],
                ) from None
        series.append(Series(name=name, points=tuple(points)))

    if card.idiom in (IdiomType.PIE_CHART, IdiomType.DONUT_CHART):
        if len(series) != 1:
            raise ChartDataError(
                f"{card.idiom.label} needs exactly one y series, found {len(series)}"
            )
        negatives = [
            i for i, p in enumerate(series[0].points) if p is not None and p < 0
        ]
        if negatives:
            raise ChartDataError(
                f"{card.idiom.label} values must be non-negative; "
                f"negative at rows {negatives}",
                [Violation("table", f"negative values at rows {negatives}")],
            )

    labels = card.binding.labels
    return ChartSpec(
        idiom=card.idiom,
        categories=tuple(x_col.values),
        series=tuple(series),
        labels=Labels(
            title=labels.title or card.name,
            x_label=labels.x_label or card.binding.x_column,
            y_label=labels.y_label or ", ".join(card.binding.y_columns),
        ),
    )


def render_card(card: IndicatorSpecificationCard) -> CardDocument:
    gq = card.goal_question
    goal_body = f"Goal: {gq.goal}\nQuestion: {gq.question}"
    if gq.idea.strip():
        goal_body += f"\nIdea: {gq.idea}"

    if card.task is None:
        task_body = "not specified"
    else:
        task_body = f"{card.task.label}: {TASK_DESCRIPTIONS[card.task]}"

    col_bits = ", ".join(f"{c.name}: {c.dtype.label}" for c in card.table.columns)
    data_body = (
        f"{len(card.table.columns)} columns ({col_bits}); {card.table.row_count} rows"
    )

    idiom_body = card.idiom.label

    sections = (
        Section(SECTION_HEADINGS[0], goal_body),
        Section(SECTION_HEADINGS[1], task_body),
        Section(SECTION_HEADINGS[2], data_body),
        Section(SECTION_HEADINGS[3], idiom_body),
    )
    rows = None
    if card.table.row_count <= MAX_PREVIEW_ROWS:
        rows = tuple(card.table.rows())
    return CardDocument(
        sections=sections,
        chart_spec=build_chart_spec(card),
        table_columns=tuple((c.name, c.dtype) for c in card.table.columns),
        row_count=card.table.row_count,
        rows=rows,
    )


def export_card_json(card: IndicatorSpecificationCard) -> bytes:
    """Byte-identical to the canonical card serialization."""
    return serialize_card(card).encode("utf-8")
