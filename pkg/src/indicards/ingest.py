"""CSV parsing, column type inference, sample-data prepopulation, and table edits.

CSV is UTF-8, comma-delimited, RFC-4180 quoting, mandatory header row.
Inference marks a column numerical only when every non-empty cell parses as a
finite decimal (and at least one cell is non-empty); it never produces the
ordered-categorical type, which is user-set only.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import CsvError, CsvTooLargeError, EditError, ModelError, Violation
from .model import (
    Column,
    DataRequirement,
    DataTable,
    DataType,
    expect_int,
    expect_object,
    expect_str,
    is_missing,
    is_numeric_text,
    non_numeric_rows,
    parse_enum,
)

MAX_UPLOAD_BYTES = 5 * 1024 * 1024
MAX_ROWS = 10_000

_SAMPLE_ROWS = 3


def infer_column_type(values: Sequence[str]) -> DataType:
    """Numerical iff all non-empty cells are decimal numbers and one exists;
    otherwise categorical. Deterministic and order-independent."""
    non_empty = [v for v in values if not is_missing(v)]
    if non_empty and all(is_numeric_text(v) for v in non_empty):
        return DataType.NUMERICAL
    return DataType.CATEGORICAL


def parse_csv(data: bytes) -> DataTable:
    if len(data) > MAX_UPLOAD_BYTES:
        raise CsvTooLargeError(
            f"upload is {len(data)} bytes, maximum is {MAX_UPLOAD_BYTES}"
        )
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise CsvError(
            f"not valid UTF-8: {exc}", [Violation("", "input is not valid UTF-8")]
        ) from None
    if not text.strip():
        raise CsvError("empty input", [Violation("", "empty input")])

    try:
        records = list(csv.reader(io.StringIO(text, newline="")))
    except csv.Error as exc:
        raise CsvError(f"malformed CSV: {exc}", [Violation("", f"malformed CSV: {exc}")]) from None

    header = records[0] if records else []
    if not header or all(not cell.strip() for cell in header):
        raise CsvError("no header row", [Violation("row 1", "no header row")])

    names = []
    problems: list[Violation] = []
    for i, cell in enumerate(header):
        name = cell.strip()
        if not name:
            problems.append(Violation("row 1", f"column {i + 1}: empty header name"))
        names.append(name)
    seen: set[str] = set()
    for name in names:
        key = name.casefold()
        if key and key in seen:
            problems.append(Violation("row 1", f"duplicate header name '{key}'"))
        seen.add(key)
    if problems:
        first = problems[0]
        raise CsvError(f"{first.path}: {first.message}", problems)

    width = len(names)
    rows: list[list[str]] = []
    row_problems: list[Violation] = []
    for ordinal, record in enumerate(records[1:], start=2):
        if len(record) != width:
            row_problems.append(
                Violation(
                    f"row {ordinal}",
                    f"expected {width} fields, found {len(record)}",
                )
            )
            continue
        rows.append(record)
    if row_problems:
        first = row_problems[0]
        raise CsvError(f"{first.path}: {first.message}", row_problems)
    if len(rows) > MAX_ROWS:
        raise CsvTooLargeError(f"{len(rows)} rows, maximum is {MAX_ROWS}")

    columns = []
    for i, name in enumerate(names):
        cells = tuple(row[i] for row in rows)
        columns.append(Column(name=name, dtype=infer_column_type(cells), values=cells))
    return DataTable(columns=tuple(columns))


def prepopulate_table(requirements: Sequence[DataRequirement]) -> DataTable:
    """Sample table matching the planned data: one column per requirement,
    three placeholder rows per its type."""
    if not requirements:
        raise EditError("at least one requirement is needed to prepopulate a table")
    columns = []
    for req in requirements:
        if req.dtype is DataType.NUMERICAL:
            cells = tuple(str(10 * (i + 1)) for i in range(_SAMPLE_ROWS))
        elif req.dtype is DataType.CATEGORICAL_ORDERED:
            cells = tuple(f"Level {i + 1}" for i in range(_SAMPLE_ROWS))
        else:
            cells = tuple(f"Item {i + 1}" for i in range(_SAMPLE_ROWS))
        columns.append(Column(name=req.name, dtype=req.dtype, values=cells))
    return DataTable(columns=tuple(columns))


def serialize_csv(table: DataTable) -> bytes:
    """RFC-4180-style CSV: header first, CRLF line ends, quoting only when needed."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(table.column_names())
    for row in table.rows():
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# Table edits


@dataclass(frozen=True)
class AddRow:
    pass


@dataclass(frozen=True)
class AddColumn:
    name: str
    dtype: DataType


@dataclass(frozen=True)
class RemoveRow:
    index: int  # 0-based data row


@dataclass(frozen=True)
class RemoveColumn:
    name: str


@dataclass(frozen=True)
class SetCell:
    row: int  # 0-based data row
    column: str
    text: str


@dataclass(frozen=True)
class SetColumnType:
    name: str
    dtype: DataType


@dataclass(frozen=True)
class RenameColumn:
    old: str
    new: str


TableEdit = Union[
    AddRow, AddColumn, RemoveRow, RemoveColumn, SetCell, SetColumnType, RenameColumn
]

_EDIT_OPS = {
    "add_row": (AddRow, ()),
    "add_column": (AddColumn, ("name", "dtype")),
    "remove_row": (RemoveRow, ("index",)),
    "remove_column": (RemoveColumn, ("name",)),
    "set_cell": (SetCell, ("row", "column", "text")),
    "set_column_type": (SetColumnType, ("name", "dtype")),
    "rename_column": (RenameColumn, ("old", "new")),
}


def parse_edit(raw: object) -> TableEdit:
    """Decode one edit from its JSON form, e.g. {"op": "set_cell", ...}."""
    if not isinstance(raw, dict):
        raise ModelError("edit must be an object", [Violation("", "edit must be an object")])
    op = raw.get("op")
    if op not in _EDIT_OPS:
        allowed = ", ".join(sorted(_EDIT_OPS))
        raise ModelError(
            f"op: unknown edit op {op!r}, expected one of: {allowed}",
            [Violation("op", f"unknown edit op {op!r}")],
        )
    cls, fields = _EDIT_OPS[op]
    obj = expect_object(raw, "edit", required={"op", *fields})
    kwargs = {}
    for name in fields:
        if name in ("index", "row"):
            kwargs[name] = expect_int(obj[name], f"edit.{name}")
        elif name == "dtype":
            kwargs[name] = parse_enum(DataType, obj[name], "edit.dtype")
        elif name == "text":
            kwargs[name] = expect_str(obj[name], "edit.text", allow_empty=True)
        else:
            kwargs[name] = expect_str(obj[name], f"edit.{name}")
    return cls(**kwargs)


def edit_table(table: DataTable, edit: TableEdit) -> DataTable:
    """Apply one edit, returning a new table; any failure leaves the input
    table unchanged and reports what was wrong."""
    if isinstance(edit, AddRow):
        return _add_row(table)
    if isinstance(edit, AddColumn):
        return _add_column(table, edit)
    if isinstance(edit, RemoveRow):
        return _remove_row(table, edit)
    if isinstance(edit, RemoveColumn):
        return _remove_column(table, edit)
    if isinstance(edit, SetCell):
        return _set_cell(table, edit)
    if isinstance(edit, SetColumnType):
        return _set_column_type(table, edit)
    if isinstance(edit, RenameColumn):
        return _rename_column(table, edit)
    raise EditError(f"unsupported edit: {edit!r}")


def _require_column(table: DataTable, name: str) -> Column:
    col = table.column(name)
    if col is None:
        raise EditError(
            f"column '{name}' does not exist", [Violation("column", f"'{name}' does not exist")]
        )
    return col


def _require_row(table: DataTable, index: int) -> None:
    if index < 0 or index >= table.row_count:
        raise EditError(
            f"row {index} does not exist", [Violation("row", f"{index} does not exist")]
        )


def _add_row(table: DataTable) -> DataTable:
    if not table.columns:
        raise EditError("cannot add a row to a table with no columns")
    return DataTable(
        columns=tuple(
            Column(c.name, c.dtype, c.values + ("",)) for c in table.columns
        )
    )


def _add_column(table: DataTable, edit: AddColumn) -> DataTable:
    name = edit.name.strip()
    if not name:
        raise EditError("column name must be non-empty", [Violation("name", "must be non-empty")])
    if any(c.name.casefold() == name.casefold() for c in table.columns):
        raise EditError(
            f"column '{name}' already exists", [Violation("name", f"'{name}' already exists")]
        )
    blank = tuple("" for _ in range(table.row_count))
    return DataTable(columns=table.columns + (Column(name, edit.dtype, blank),))


def _remove_row(table: DataTable, edit: RemoveRow) -> DataTable:
    _require_row(table, edit.index)
    return DataTable(
        columns=tuple(
            Column(c.name, c.dtype, c.values[: edit.index] + c.values[edit.index + 1 :])
            for c in table.columns
        )
    )


def _remove_column(table: DataTable, edit: RemoveColumn) -> DataTable:
    _require_column(table, edit.name)
    return DataTable(columns=tuple(c for c in table.columns if c.name != edit.name))


def _set_cell(table: DataTable, edit: SetCell) -> DataTable:
    col = _require_column(table, edit.column)
    _require_row(table, edit.row)
    if (
        col.dtype is DataType.NUMERICAL
        and not is_missing(edit.text)
        and not is_numeric_text(edit.text)
    ):
        raise EditError(
            f"value {edit.text!r} is not numeric for numerical column '{col.name}'",
            [Violation("text", "not a decimal number")],
        )
    new_values = col.values[: edit.row] + (edit.text,) + col.values[edit.row + 1 :]
    return DataTable(
        columns=tuple(
            Column(c.name, c.dtype, new_values) if c.name == col.name else c
            for c in table.columns
        )
    )


def _set_column_type(table: DataTable, edit: SetColumnType) -> DataTable:
    col = _require_column(table, edit.name)
    if edit.dtype is DataType.NUMERICAL:
        bad = non_numeric_rows(col.values)
        if bad:
            raise EditError(
                f"column '{col.name}' has non-numeric cells at rows {bad}",
                [Violation("values", f"non-numeric cells at rows {bad}")],
            )
    return DataTable(
        columns=tuple(
            Column(c.name, edit.dtype, c.values) if c.name == col.name else c
            for c in table.columns
        )
    )


def _rename_column(table: DataTable, edit: RenameColumn) -> DataTable:
    col = _require_column(table, edit.old)
    new = edit.new.strip()
    if not new:
        raise EditError("new column name must be non-empty", [Violation("new", "must be non-empty")])
    for other in table.columns:
        if other.name != col.name and other.name.casefold() == new.casefold():
            raise EditError(
                f"column '{new}' already exists", [Violation("new", f"'{new}' already exists")]
            )
    return DataTable(
        columns=tuple(
            Column(new, c.dtype, c.values) if c.name == col.name else c
            for c in table.columns
        )
    )
