"""Rule-based chart recommendation.

A rules table maps each chart idiom to the data it needs (minimum column
counts per data type), the analysis tasks it serves, and the column types
each axis accepts. Given a task and/or a data signature, the recommender
flags every idiom's task fit and data fit, ranks them, and explains which
input produced each fit.

The shipped table lives in ``data/default_rules.json`` and can be replaced
with a user rules file of the same format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .errors import ModelError, RulesError, UnknownIdiomError, Violation
from .model import (
    AxisBinding,
    DataRequirement,
    DataSignature,
    DataTable,
    DataType,
    IdiomType,
    TaskType,
    expect_int,
    expect_list,
    expect_object,
    expect_str,
    parse_enum,
)

Y_ARITY_ONE = "one"
Y_ARITY_MANY = "many"


@dataclass(frozen=True)
class SlotRequirement:
    """Minimum column count for one data type; categorical slots may accept
    ordered-categorical columns when ``allow_ordered`` is set."""

    dtype: DataType
    count: int
    allow_ordered: bool = False


@dataclass(frozen=True)
class ChannelSpec:
    x_types: tuple[DataType, ...]
    y_types: tuple[DataType, ...]
    y_arity: str  # "one" | "many"

    def to_dict(self) -> dict:
        return {
            "x_types": [t.value for t in self.x_types],
            "y_types": [t.value for t in self.y_types],
            "y_arity": self.y_arity,
        }


@dataclass(frozen=True)
class IdiomRule:
    idiom: IdiomType
    requirement: tuple[SlotRequirement, ...]
    tasks: frozenset[TaskType]
    channel_spec: ChannelSpec
    description: str
    max_counts: Optional[DataSignature] = None

    def required_count(self, dtype: DataType) -> int:
        for slot in self.requirement:
            if slot.dtype is dtype:
                return slot.count
        return 0

    def ordered_allowed(self) -> bool:
        for slot in self.requirement:
            if slot.dtype is DataType.CATEGORICAL:
                return slot.allow_ordered
        return False

    def describe_requirement(self) -> str:
        parts = []
        for dtype in (DataType.CATEGORICAL, DataType.CATEGORICAL_ORDERED, DataType.NUMERICAL):
            n = self.required_count(dtype)
            if n:
                parts.append(f"{n} {dtype.label}")
        return " + ".join(parts) if parts else "no columns"

    def to_dict(self) -> dict:
        requirement = {}
        for slot in self.requirement:
            entry: dict = {"count": slot.count}
            if slot.dtype is DataType.CATEGORICAL:
                entry["allow_ordered"] = slot.allow_ordered
            requirement[slot.dtype.value] = entry
        return {
            "idiom": self.idiom.value,
            "requirement": requirement,
            "max_counts": self.max_counts.to_dict() if self.max_counts else None,
            "tasks": sorted(t.value for t in self.tasks),
            "channel_spec": self.channel_spec.to_dict(),
            "description": self.description,
        }


@dataclass(frozen=True)
class Recommendation:
    idiom: IdiomType
    task_fit: bool
    data_fit: bool
    rank: int
    provenance: str

    def to_dict(self) -> dict:
        return {
            "idiom": self.idiom.value,
            "task_fit": self.task_fit,
            "data_fit": self.data_fit,
            "rank": self.rank,
            "provenance": self.provenance,
        }


# ---------------------------------------------------------------------------
# Rules loading


def _rule_from_dict(raw: object, index: int) -> IdiomRule:
    path = f"rules[{index}]"
    obj = expect_object(
        raw,
        path,
        required={"idiom", "requirement", "tasks", "channel_spec", "description"},
        optional={"max_counts"},
    )
    idiom = parse_enum(IdiomType, obj["idiom"], f"{path}.idiom")

    req_obj = expect_object(
        obj["requirement"],
        f"{path}.requirement",
        required=set(),
        optional={t.value for t in DataType},
    )
    slots = []
    for dtype in DataType:
        if dtype.value not in req_obj:
            continue
        entry = expect_object(
            req_obj[dtype.value],
            f"{path}.requirement.{dtype.value}",
            required={"count"},
            optional={"allow_ordered"},
        )
        allow = entry.get("allow_ordered", False)
        if not isinstance(allow, bool):
            raise ModelError(
                f"{path}.requirement.{dtype.value}.allow_ordered: expected a boolean",
                [Violation(f"{path}.requirement.{dtype.value}.allow_ordered", "expected a boolean")],
            )
        count = expect_int(entry["count"], f"{path}.requirement.{dtype.value}.count")
        if count < 0:
            raise ModelError(
                f"{path}.requirement.{dtype.value}.count: must be non-negative",
                [Violation(f"{path}.requirement.{dtype.value}.count", "must be non-negative")],
            )
        slots.append(SlotRequirement(dtype=dtype, count=count, allow_ordered=allow))

    max_counts_raw = obj.get("max_counts")
    max_counts = None
    if max_counts_raw is not None:
        from .model import signature_from_dict

        max_counts = signature_from_dict(max_counts_raw, f"{path}.max_counts")

    tasks = frozenset(
        parse_enum(TaskType, t, f"{path}.tasks[{i}]")
        for i, t in enumerate(expect_list(obj["tasks"], f"{path}.tasks"))
    )

    spec_obj = expect_object(
        obj["channel_spec"], f"{path}.channel_spec", required={"x_types", "y_types", "y_arity"}
    )
    x_types = tuple(
        parse_enum(DataType, t, f"{path}.channel_spec.x_types[{i}]")
        for i, t in enumerate(expect_list(spec_obj["x_types"], f"{path}.channel_spec.x_types"))
    )
    y_types = tuple(
        parse_enum(DataType, t, f"{path}.channel_spec.y_types[{i}]")
        for i, t in enumerate(expect_list(spec_obj["y_types"], f"{path}.channel_spec.y_types"))
    )
    y_arity = expect_str(spec_obj["y_arity"], f"{path}.channel_spec.y_arity")
    if y_arity not in (Y_ARITY_ONE, Y_ARITY_MANY):
        raise ModelError(
            f"{path}.channel_spec.y_arity: must be 'one' or 'many'",
            [Violation(f"{path}.channel_spec.y_arity", "must be 'one' or 'many'")],
        )

    rule = IdiomRule(
        idiom=idiom,
        requirement=tuple(slots),
        tasks=tasks,
        channel_spec=ChannelSpec(x_types=x_types, y_types=y_types, y_arity=y_arity),
        description=expect_str(obj["description"], f"{path}.description"),
        max_counts=max_counts,
    )
    _check_rule(rule, index)
    return rule


def _check_rule(rule: IdiomRule, index: int) -> None:
    if not rule.tasks:
        raise RulesError(f"rule {index} ({rule.idiom.value}): tasks must be non-empty")
    if sum(s.count for s in rule.requirement) < 1:
        raise RulesError(f"rule {index} ({rule.idiom.value}): requirement total must be >= 1")
    reachable = set(rule.channel_spec.x_types) | set(rule.channel_spec.y_types)
    for slot in rule.requirement:
        if slot.count > 0 and slot.dtype not in reachable:
            raise RulesError(
                f"rule {index} ({rule.idiom.value}): required type "
                f"'{slot.dtype.value}' is not accepted by any channel"
            )


def parse_rules(raw: object) -> tuple[IdiomRule, ...]:
    items = expect_list(raw, "rules")
    rules = []
    seen: set[IdiomType] = set()
    for i, item in enumerate(items):
        try:
            rule = _rule_from_dict(item, i)
        except ModelError as exc:
            raise RulesError(f"rule {i}: {exc}", exc.details) from None
        if rule.idiom in seen:
            raise RulesError(f"rule {i}: duplicate idiom '{rule.idiom.value}'")
        seen.add(rule.idiom)
        rules.append(rule)
    return tuple(rules)


def load_rules_file(path: Union[str, Path]) -> tuple[IdiomRule, ...]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RulesError(f"cannot read rules file {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RulesError(f"rules file {path} is not valid JSON: {exc}") from None
    return parse_rules(raw)


@lru_cache(maxsize=1)
def default_rules() -> tuple[IdiomRule, ...]:
    """The built-in rules table; every idiom appears exactly once."""
    raw = json.loads(
        resources.files("indicards").joinpath("data/default_rules.json").read_text("utf-8")
    )
    rules = parse_rules(raw)
    covered = {r.idiom for r in rules}
    missing = [i.value for i in IdiomType if i not in covered]
    if missing:
        raise RulesError(f"default rules table is missing idioms: {missing}")
    return rules


def rule_for(idiom: IdiomType, rules: Sequence[IdiomRule]) -> IdiomRule:
    for rule in rules:
        if rule.idiom is idiom:
            return rule
    raise UnknownIdiomError(f"no rule for idiom '{idiom.value}'")


# ---------------------------------------------------------------------------
# Signature computation and matching


def signature_of(source: Union[DataTable, Iterable[DataRequirement]]) -> DataSignature:
    """Count available column types, from either planned requirements or a live table."""
    if isinstance(source, DataTable):
        dtypes = [c.dtype for c in source.columns]
    else:
        dtypes = [r.dtype for r in source]
    counts: dict[DataType, int] = {}
    for dt in dtypes:
        counts[dt] = counts.get(dt, 0) + 1
    return DataSignature.from_counts(counts)


def satisfies(signature: DataSignature, rule: IdiomRule) -> bool:
    """True iff the signature can cover the rule's minimum counts (ordered
    columns may fill categorical slots where allowed) without exceeding
    ``max_counts`` under the best assignment of ordered columns."""
    need_cat = rule.required_count(DataType.CATEGORICAL)
    need_num = rule.required_count(DataType.NUMERICAL)
    need_ord = rule.required_count(DataType.CATEGORICAL_ORDERED)
    allow = rule.ordered_allowed()

    if signature.numerical < need_num:
        return False

    # k = ordered columns counted as categorical.
    max_divert = signature.categorical_ordered if allow else 0
    for k in range(0, max_divert + 1):
        cat_have = signature.categorical + k
        ord_have = signature.categorical_ordered - k
        if cat_have < need_cat or ord_have < need_ord:
            continue
        if rule.max_counts is not None:
            mc = rule.max_counts
            if cat_have > mc.categorical or ord_have > mc.categorical_ordered:
                continue
            if signature.numerical > mc.numerical:
                continue
        return True
    return False


# ---------------------------------------------------------------------------
# Recommendations


def recommend_idioms(
    task: Optional[TaskType],
    signature: DataSignature,
    rules: Sequence[IdiomRule],
) -> list[Recommendation]:
    """One recommendation per rule, ranked: both fits first, then data-only,
    then task-only, then neither; ties broken by idiom declaration order."""
    scored = []
    for rule in rules:
        data_fit = satisfies(signature, rule)
        task_fit = task is not None and task in rule.tasks
        scored.append((rule.idiom, task_fit, data_fit))

    def fit_class(task_fit: bool, data_fit: bool) -> int:
        if task_fit and data_fit:
            return 0
        if data_fit:
            return 1
        if task_fit:
            return 2
        return 3

    scored.sort(key=lambda t: (fit_class(t[1], t[2]), t[0].order))

    out = []
    for rank, (idiom, task_fit, data_fit) in enumerate(scored, start=1):
        parts = []
        if task_fit:
            parts.append(f"task: {task.value}")
        if data_fit:
            parts.append(f"data: {signature.describe()}")
        provenance = "; ".join(parts) if parts else "no fit from task or data"
        out.append(
            Recommendation(
                idiom=idiom,
                task_fit=task_fit,
                data_fit=data_fit,
                rank=rank,
                provenance=provenance,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Axis candidates and binding validation


def axis_candidates(
    idiom: IdiomType, table: DataTable, rules: Sequence[IdiomRule]
) -> dict[str, list[str]]:
    """Column names eligible for each axis, in table column order."""
    rule = rule_for(idiom, rules)
    spec = rule.channel_spec
    return {
        "x": [c.name for c in table.columns if c.dtype in spec.x_types],
        "y": [c.name for c in table.columns if c.dtype in spec.y_types],
    }


def validate_binding(
    idiom: IdiomType,
    table: DataTable,
    binding: AxisBinding,
    rules: Sequence[IdiomRule],
) -> list[Violation]:
    rule = rule_for(idiom, rules)
    candidates = axis_candidates(idiom, table, rules)
    report: list[Violation] = []

    if binding.x_column not in candidates["x"]:
        wanted = " or ".join(t.label for t in rule.channel_spec.x_types)
        report.append(
            Violation(
                "binding.x_column",
                f"x-axis requires {wanted}; '{binding.x_column}' is not eligible",
            )
        )
    for i, name in enumerate(binding.y_columns):
        if name not in candidates["y"]:
            wanted = " or ".join(t.label for t in rule.channel_spec.y_types)
            report.append(
                Violation(
                    f"binding.y_columns[{i}]",
                    f"y-axis requires {wanted}; '{name}' is not eligible",
                )
            )
    if rule.channel_spec.y_arity == Y_ARITY_ONE and len(binding.y_columns) != 1:
        report.append(
            Violation(
                "binding.y_columns",
                f"y arity must be 1 for {idiom.label}, found {len(binding.y_columns)}",
            )
        )
    return report
