"""Draft lifecycle: from a validated goal/question to a finalized card.

Steps may arrive in any order (task-driven, data-driven, or chart-first);
the only hard ordering rule is that an axis binding needs its chart idiom
and table to exist. Changing the idiom or table under an existing binding
revalidates it and drops it with a warning instead of blocking the change.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Union

from .errors import (
    FinalizeError,
    ModelError,
    StepError,
    ValidationFailure,
    Violation,
)
from .ingest import prepopulate_table
from .model import (
    AxisBinding,
    DataTable,
    GoalQuestion,
    IdiomType,
    IndicatorSpecificationCard,
    TaskType,
    binding_column_violations,
    binding_from_dict,
    canonical_json,
    expect_list,
    expect_object,
    expect_str,
    goal_question_from_dict,
    new_id,
    now_stamp,
    parse_enum,
    table_from_dict,
    validate_goal_question,
)
from .recommend import IdiomRule, Recommendation, recommend_idioms, signature_of, validate_binding

STEP_LOG_CAP = 200


class PathChoice(str, Enum):
    VISUALIZATION = "visualization"
    DATASET = "dataset"


@dataclass(frozen=True)
class Draft:
    id: str
    goal_question: GoalQuestion
    path: Optional[PathChoice] = None
    task: Optional[TaskType] = None
    idiom: Optional[IdiomType] = None
    table: Optional[DataTable] = None
    binding: Optional[AxisBinding] = None
    step_log: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "goal_question": self.goal_question.to_dict(),
            "path": self.path.value if self.path else None,
            "task": self.task.value if self.task else None,
            "idiom": self.idiom.value if self.idiom else None,
            "table": self.table.to_dict() if self.table else None,
            "binding": self.binding.to_dict() if self.binding else None,
            "step_log": list(self.step_log),
            "warnings": list(self.warnings),
        }


# Steps


@dataclass(frozen=True)
class SetTask:
    task: Optional[TaskType]


@dataclass(frozen=True)
class SetIdiom:
    idiom: IdiomType


@dataclass(frozen=True)
class SetTable:
    table: DataTable


@dataclass(frozen=True)
class SetBinding:
    binding: AxisBinding


@dataclass(frozen=True)
class ClearTask:
    pass


@dataclass(frozen=True)
class ClearIdiom:
    pass


DraftStep = Union[SetTask, SetIdiom, SetTable, SetBinding, ClearTask, ClearIdiom]


def parse_step(raw: object) -> DraftStep:
    """Decode one step from its JSON form, e.g. {"type": "set_task", "task": "trend"}."""
    if not isinstance(raw, dict):
        raise ModelError("step must be an object", [Violation("", "step must be an object")])
    kind = raw.get("type")
    if kind == "set_task":
        obj = expect_object(raw, "step", required={"type", "task"})
        task = obj["task"]
        return SetTask(None if task is None else parse_enum(TaskType, task, "step.task"))
    if kind == "set_idiom":
        obj = expect_object(raw, "step", required={"type", "idiom"})
        return SetIdiom(parse_enum(IdiomType, obj["idiom"], "step.idiom"))
    if kind == "set_table":
        obj = expect_object(raw, "step", required={"type", "table"})
        return SetTable(table_from_dict(obj["table"], "step.table"))
    if kind == "set_binding":
        obj = expect_object(raw, "step", required={"type", "binding"})
        return SetBinding(binding_from_dict(obj["binding"], "step.binding"))
    if kind == "clear_task":
        expect_object(raw, "step", required={"type"})
        return ClearTask()
    if kind == "clear_idiom":
        expect_object(raw, "step", required={"type"})
        return ClearIdiom()
    raise ModelError(
        f"step.type: unknown step type {kind!r}",
        [Violation("step.type", f"unknown step type {kind!r}")],
    )


# ---------------------------------------------------------------------------
# Operations


def start_draft(gq: GoalQuestion) -> Draft:
    report = validate_goal_question(gq)
    if report:
        raise ValidationFailure("invalid goal/question", report)
    return Draft(id=new_id(), goal_question=gq, step_log=("goal",))


def choose_path(draft: Draft, path: PathChoice) -> Draft:
    """Record the entry point. Advisory only: it drives suggestion order and
    prepopulation, never which steps are accepted."""
    return replace(draft, path=path)


def _log(draft: Draft, entry: str) -> tuple[str, ...]:
    log = draft.step_log + (entry,)
    return log[-STEP_LOG_CAP:]


def _drop_invalid_binding(
    draft: Draft,
    idiom: Optional[IdiomType],
    table: Optional[DataTable],
    rules: Sequence[IdiomRule],
    reason: str,
) -> tuple[Optional[AxisBinding], tuple[str, ...]]:
    if draft.binding is None:
        return None, ()
    if idiom is None or table is None:
        return None, (f"binding dropped: {reason}",)
    report = validate_binding(idiom, table, draft.binding, rules)
    if report:
        detail = "; ".join(f"{v.path}: {v.message}" for v in report)
        return None, (f"binding dropped: {detail}",)
    return draft.binding, ()


def apply_step(draft: Draft, step: DraftStep, rules: Sequence[IdiomRule]) -> Draft:
    """Apply one step, returning the new draft; invalid steps raise and leave
    the draft unchanged. Warnings describe side effects of the latest step."""
    if isinstance(step, SetTask):
        label = step.task.value if step.task else "none"
        return replace(
            draft, task=step.task, warnings=(), step_log=_log(draft, f"set_task:{label}")
        )
    if isinstance(step, ClearTask):
        return replace(draft, task=None, warnings=(), step_log=_log(draft, "clear_task"))
    if isinstance(step, SetIdiom):
        binding, warnings = _drop_invalid_binding(
            draft, step.idiom, draft.table, rules, "idiom changed"
        )
        return replace(
            draft,
            idiom=step.idiom,
            binding=binding,
            warnings=warnings,
            step_log=_log(draft, f"set_idiom:{step.idiom.value}"),
        )
    if isinstance(step, ClearIdiom):
        binding, warnings = _drop_invalid_binding(draft, None, draft.table, rules, "idiom cleared")
        return replace(
            draft,
            idiom=None,
            binding=binding,
            warnings=warnings,
            step_log=_log(draft, "clear_idiom"),
        )
    if isinstance(step, SetTable):
        binding, warnings = _drop_invalid_binding(
            draft, draft.idiom, step.table, rules, "table changed"
        )
        return replace(
            draft,
            table=step.table,
            binding=binding,
            warnings=warnings,
            step_log=_log(draft, "set_table"),
        )
    if isinstance(step, SetBinding):
        missing = [name for name in ("idiom", "table") if getattr(draft, name) is None]
        if missing:
            raise StepError(
                "; ".join(f"{name} required" for name in missing),
                [Violation(name, "required before binding") for name in missing],
            )
        report = validate_binding(draft.idiom, draft.table, step.binding, rules)
        if report:
            raise StepError("invalid binding", report)
        return replace(
            draft, binding=step.binding, warnings=(), step_log=_log(draft, "set_binding")
        )
    raise StepError(f"unsupported step: {step!r}")


def next_steps(draft: Draft) -> list[str]:
    """Suggested remaining steps, ordered by the chosen path."""
    if draft.path is PathChoice.DATASET:
        order = ["table", "task", "idiom"]
    else:
        order = ["task", "idiom", "table"]
    remaining = [name for name in order if getattr(draft, name) is None]
    if draft.binding is None:
        remaining.append("binding")
    if draft.idiom is not None and draft.table is not None and draft.binding is not None:
        remaining.append("finalize")
    return remaining


def next_recommendations(draft: Draft, rules: Sequence[IdiomRule]) -> list[Recommendation]:
    """Recommendations for the draft's current state: the live table's
    signature once data is attached, the planned requirements before that."""
    if draft.table is not None:
        signature = signature_of(draft.table)
    else:
        signature = signature_of(draft.goal_question.requirements)
    return recommend_idioms(draft.task, signature, rules)


def suggested_table(draft: Draft) -> tuple[DataTable, bool]:
    """The table to show in the data editor. Before any data step the sample
    table derived from the planned requirements stands in (flag True)."""
    if draft.table is not None:
        return draft.table, False
    return prepopulate_table(draft.goal_question.requirements), True


def finalize(
    draft: Draft, name: str, rules: Sequence[IdiomRule]
) -> IndicatorSpecificationCard:
    """Turn a complete draft into a version-1 card; the draft itself is kept
    until explicitly deleted."""
    problems: list[Violation] = []
    if not name.strip():
        problems.append(Violation("name", "must be non-empty"))
    for field_name in ("idiom", "table", "binding"):
        if getattr(draft, field_name) is None:
            problems.append(Violation(field_name, "not set"))
    if draft.idiom is not None and draft.table is not None and draft.binding is not None:
        report = validate_binding(draft.idiom, draft.table, draft.binding, rules)
        if report:
            detail = "; ".join(f"{v.path}: {v.message}" for v in report)
            problems.append(Violation("binding", f"invalid: {detail}"))
    if problems:
        raise FinalizeError("cannot finalize draft", problems)
    now = now_stamp()
    return IndicatorSpecificationCard(
        id=new_id(),
        name=name,
        goal_question=draft.goal_question,
        task=draft.task,
        idiom=draft.idiom,
        table=draft.table,
        binding=draft.binding,
        created_at=now,
        updated_at=now,
        version=1,
    )


# ---------------------------------------------------------------------------
# Draft JSON


def serialize_draft(draft: Draft) -> str:
    return canonical_json(draft.to_dict())


def parse_draft(text: str) -> Draft:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(
            f"malformed JSON: {exc}", [Violation("", f"malformed JSON: {exc}")]
        ) from None
    return draft_from_dict(raw)


def draft_from_dict(raw: object) -> Draft:
    obj = expect_object(
        raw,
        "",
        required={
            "id",
            "goal_question",
            "path",
            "task",
            "idiom",
            "table",
            "binding",
            "step_log",
            "warnings",
        },
    )
    gq = goal_question_from_dict(obj["goal_question"], "goal_question")
    report = validate_goal_question(gq)
    if report:
        raise ModelError(
            "draft goal_question is invalid",
            [Violation(f"goal_question.{v.path}", v.message) for v in report],
        )
    path = obj["path"]
    task = obj["task"]
    idiom = obj["idiom"]
    table = obj["table"]
    binding = obj["binding"]
    draft = Draft(
        id=expect_str(obj["id"], "id"),
        goal_question=gq,
        path=None if path is None else parse_enum(PathChoice, path, "path"),
        task=None if task is None else parse_enum(TaskType, task, "task"),
        idiom=None if idiom is None else parse_enum(IdiomType, idiom, "idiom"),
        table=None if table is None else table_from_dict(table, "table"),
        binding=None if binding is None else binding_from_dict(binding, "binding"),
        step_log=tuple(
            expect_str(v, f"step_log[{i}]")
            for i, v in enumerate(expect_list(obj["step_log"], "step_log"))
        ),
        warnings=tuple(
            expect_str(v, f"warnings[{i}]")
            for i, v in enumerate(expect_list(obj["warnings"], "warnings"))
        ),
    )
    if draft.binding is not None:
        if draft.idiom is None or draft.table is None:
            raise ModelError(
                "binding requires idiom and table",
                [Violation("binding", "requires idiom and table")],
            )
        column_report = binding_column_violations(draft.binding, draft.table)
        if column_report:
            raise ModelError(
                "; ".join(f"{v.path}: {v.message}" for v in column_report), column_report
            )
    return draft
