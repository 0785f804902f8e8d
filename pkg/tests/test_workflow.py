import itertools
import random

import pytest

from indicards.errors import FinalizeError, StepError, ValidationFailure
from indicards.model import (
    AxisBinding,
    Column,
    DataRequirement,
    DataTable,
    DataType,
    GoalQuestion,
    IdiomType,
    Labels,
    TaskType,
    validate_goal_question,
)
from indicards.recommend import recommend_idioms, signature_of, validate_binding
from indicards.workflow import (
    ClearIdiom,
    ClearTask,
    PathChoice,
    SetBinding,
    SetIdiom,
    SetTable,
    SetTask,
    apply_step,
    choose_path,
    finalize,
    next_recommendations,
    next_steps,
    parse_draft,
    parse_step,
    serialize_draft,
    start_draft,
    suggested_table,
)

from genutil import binding_for, rand_goal_question, table_for_idiom

GQ = GoalQuestion(
    goal="monitor grades",
    question="how are grades distributed?",
    requirements=(
        DataRequirement("student", DataType.CATEGORICAL),
        DataRequirement("grade", DataType.NUMERICAL),
    ),
)

TABLE = DataTable(
    (
        Column("student", DataType.CATEGORICAL, ("Ada", "Bo")),
        Column("grade", DataType.NUMERICAL, ("9", "7")),
    )
)

BINDING = AxisBinding("student", ("grade",), Labels())


class TestStartDraft:
    def test_initial_state(self):
        draft = start_draft(GQ)
        assert draft.task is None and draft.idiom is None
        assert draft.table is None and draft.binding is None
        assert draft.step_log == ("goal",)

    def test_invalid_goal_question_propagates_report(self):
        bad = GoalQuestion(
            goal="g", question="q",
            requirements=(DataRequirement("grade", DataType.NUMERICAL),),
        )
        with pytest.raises(ValidationFailure) as err:
            start_draft(bad)
        assert err.value.details == validate_goal_question(bad)

    def test_distinct_ids(self):
        assert start_draft(GQ).id != start_draft(GQ).id


class TestChoosePath:
    def test_visualization_suggests_galleries_first(self):
        draft = choose_path(start_draft(GQ), PathChoice.VISUALIZATION)
        assert next_steps(draft)[:2] == ["task", "idiom"]

    def test_dataset_suggests_table_first_and_prepopulates(self):
        draft = choose_path(start_draft(GQ), PathChoice.DATASET)
        assert next_steps(draft)[0] == "table"
        table, prepopulated = suggested_table(draft)
        assert prepopulated
        assert table.column_names() == ["student", "grade"]
        assert table.row_count == 3

    def test_repick_keeps_table(self, rules):
        draft = choose_path(start_draft(GQ), PathChoice.DATASET)
        draft = apply_step(draft, SetTable(TABLE), rules)
        draft = choose_path(draft, PathChoice.VISUALIZATION)
        assert draft.path is PathChoice.VISUALIZATION
        assert draft.table == TABLE

    def test_only_path_changes(self):
        draft = start_draft(GQ)
        after = choose_path(draft, PathChoice.DATASET)
        assert after.to_dict() == {**draft.to_dict(), "path": "dataset"}


class TestApplyStep:
    def test_task_driven_order(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetTask(TaskType.DISTRIBUTION), rules)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        draft = apply_step(draft, SetBinding(BINDING), rules)
        card = finalize(draft, "Grade distribution", rules)
        assert card.task is TaskType.DISTRIBUTION

    def test_visualization_driven_order_without_task(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        draft = apply_step(draft, SetBinding(BINDING), rules)
        card = finalize(draft, "No task card", rules)
        assert card.task is None

    def test_binding_before_table_fails_unchanged(self, rules):
        draft = apply_step(start_draft(GQ), SetIdiom(IdiomType.BAR_CHART), rules)
        with pytest.raises(StepError) as err:
            apply_step(draft, SetBinding(BINDING), rules)
        assert "table required" in str(err.value)
        assert draft.binding is None
        assert draft.step_log[-1] == "set_idiom:bar_chart"

    def test_binding_requires_idiom_too(self, rules):
        draft = apply_step(start_draft(GQ), SetTable(TABLE), rules)
        with pytest.raises(StepError) as err:
            apply_step(draft, SetBinding(BINDING), rules)
        assert "idiom required" in str(err.value)

    def test_invalid_binding_rejected(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        bad = AxisBinding("grade", ("grade",), Labels())
        with pytest.raises(StepError):
            apply_step(draft, SetBinding(bad), rules)
        assert draft.binding is None

    def test_idiom_change_drops_incompatible_binding_with_warning(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        draft = apply_step(draft, SetBinding(BINDING), rules)
        # Scatter needs numerical on x; the categorical binding is now invalid.
        draft = apply_step(draft, SetIdiom(IdiomType.SCATTER_PLOT), rules)
        assert draft.idiom is IdiomType.SCATTER_PLOT
        assert draft.binding is None
        assert any("binding dropped" in w for w in draft.warnings)

    def test_idiom_change_keeps_compatible_binding(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        draft = apply_step(draft, SetBinding(BINDING), rules)
        draft = apply_step(draft, SetIdiom(IdiomType.PIE_CHART), rules)
        assert draft.binding == BINDING
        assert draft.warnings == ()

    def test_table_change_drops_binding_referencing_gone_column(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        draft = apply_step(draft, SetBinding(BINDING), rules)
        smaller = DataTable(
            (
                Column("student", DataType.CATEGORICAL, ("Ada",)),
                Column("points", DataType.NUMERICAL, ("1",)),
            )
        )
        draft = apply_step(draft, SetTable(smaller), rules)
        assert draft.binding is None
        assert draft.warnings

    def test_clear_idiom_drops_binding(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        draft = apply_step(draft, SetBinding(BINDING), rules)
        draft = apply_step(draft, ClearIdiom(), rules)
        assert draft.idiom is None and draft.binding is None

    def test_set_task_none_and_clear_task(self, rules):
        draft = apply_step(start_draft(GQ), SetTask(TaskType.TREND), rules)
        assert apply_step(draft, SetTask(None), rules).task is None
        assert apply_step(draft, ClearTask(), rules).task is None

    def test_step_log_capped(self, rules):
        draft = start_draft(GQ)
        for _ in range(250):
            draft = apply_step(draft, SetTask(TaskType.TREND), rules)
        assert len(draft.step_log) == 200

    def test_parse_step_variants(self):
        assert parse_step({"type": "set_task", "task": None}) == SetTask(None)
        assert parse_step({"type": "set_task", "task": "trend"}) == SetTask(TaskType.TREND)
        assert parse_step({"type": "clear_idiom"}) == ClearIdiom()
        step = parse_step({"type": "set_binding", "binding": BINDING.to_dict()})
        assert step == SetBinding(BINDING)


class TestNextRecommendations:
    def test_from_requirements_before_table(self, rules):
        draft = apply_step(start_draft(GQ), SetTask(TaskType.DISTRIBUTION), rules)
        recs = next_recommendations(draft, rules)
        top = recs[0]
        assert top.idiom is IdiomType.BAR_CHART and top.task_fit and top.data_fit

    def test_from_table_once_attached(self, rules):
        table = DataTable(
            (
                Column("name", DataType.CATEGORICAL, ("a",)),
                Column("quiz", DataType.NUMERICAL, ("1",)),
                Column("forum", DataType.NUMERICAL, ("2",)),
            )
        )
        draft = apply_step(start_draft(GQ), SetTable(table), rules)
        recs = next_recommendations(draft, rules)
        assert all(not r.task_fit for r in recs)
        expected = recommend_idioms(None, signature_of(table), rules)
        assert recs == expected

    def test_requirements_signature_never_empty(self, rules):
        draft = start_draft(GQ)
        assert signature_of(draft.goal_question.requirements).total() >= 2

    def test_consistency_with_direct_call(self, rules):
        r = random.Random(21)
        for _ in range(30):
            draft = start_draft(rand_goal_question(r, r.randint(2, 4)))
            if r.random() < 0.5:
                draft = apply_step(draft, SetTask(r.choice(list(TaskType))), rules)
            if r.random() < 0.5:
                idiom = r.choice(list(IdiomType))
                draft = apply_step(draft, SetTable(table_for_idiom(r, idiom, rules)), rules)
            signature = signature_of(
                draft.table if draft.table is not None else draft.goal_question.requirements
            )
            assert next_recommendations(draft, rules) == recommend_idioms(
                draft.task, signature, rules
            )


class TestFinalize:
    def complete_draft(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetTask(TaskType.DISTRIBUTION), rules)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        return apply_step(draft, SetBinding(BINDING), rules)

    def test_complete_draft_yields_card(self, rules):
        card = finalize(self.complete_draft(rules), "Grade distribution", rules)
        assert card.version == 1
        assert card.created_at == card.updated_at
        assert card.name == "Grade distribution"
        assert validate_binding(card.idiom, card.table, card.binding, rules) == []

    def test_missing_binding_listed(self, rules):
        draft = start_draft(GQ)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        with pytest.raises(FinalizeError) as err:
            finalize(draft, "x", rules)
        assert [v.path for v in err.value.details] == ["binding"]

    def test_error_report_equals_missing_set(self, rules):
        draft = start_draft(GQ)
        with pytest.raises(FinalizeError) as err:
            finalize(draft, "", rules)
        assert [v.path for v in err.value.details] == ["name", "idiom", "table", "binding"]

    @pytest.mark.parametrize("with_idiom", [False, True])
    @pytest.mark.parametrize("with_table", [False, True])
    @pytest.mark.parametrize("with_binding", [False, True])
    def test_report_is_exactly_the_missing_set(
        self, rules, with_idiom, with_table, with_binding
    ):
        from dataclasses import replace

        draft = replace(
            start_draft(GQ),
            idiom=IdiomType.BAR_CHART if with_idiom else None,
            table=TABLE if with_table else None,
            binding=BINDING if with_binding else None,
        )
        missing = [
            name
            for name, present in (
                ("idiom", with_idiom),
                ("table", with_table),
                ("binding", with_binding),
            )
            if not present
        ]
        if missing:
            with pytest.raises(FinalizeError) as err:
                finalize(draft, "ok", rules)
            assert [v.path for v in err.value.details] == missing
        else:
            assert finalize(draft, "ok", rules).version == 1

    def test_invalid_binding_reported_as_binding(self, rules):
        from dataclasses import replace

        bad = AxisBinding("grade", ("grade",), Labels())
        draft = replace(
            start_draft(GQ), idiom=IdiomType.BAR_CHART, table=TABLE, binding=bad
        )
        with pytest.raises(FinalizeError) as err:
            finalize(draft, "ok", rules)
        assert [v.path for v in err.value.details] == ["binding"]

    def test_two_finalizations_distinct_ids_same_payload(self, rules):
        draft = self.complete_draft(rules)
        a = finalize(draft, "Twin", rules)
        b = finalize(draft, "Twin", rules)
        assert a.id != b.id
        da, db = a.to_dict(), b.to_dict()
        for key in ("id", "created_at", "updated_at"):
            da.pop(key), db.pop(key)
        assert da == db

    def test_draft_retained(self, rules):
        draft = self.complete_draft(rules)
        finalize(draft, "kept", rules)
        assert draft.binding == BINDING


class TestCommutativity:
    def test_permutations_binding_last_sample(self, rules):
        r = random.Random(31)
        for _ in range(40):
            idiom = r.choice(list(IdiomType))
            table = table_for_idiom(r, idiom, rules)
            binding = binding_for(r, idiom, table, rules)
            if binding is None:
                continue
            task = r.choice([None, *TaskType])
            steps = [SetIdiom(idiom), SetTable(table)]
            if task is not None:
                steps.append(SetTask(task))
            payloads = set()
            for perm in itertools.permutations(steps):
                draft = start_draft(GQ)
                for step in perm:
                    draft = apply_step(draft, step, rules)
                draft = apply_step(draft, SetBinding(binding), rules)
                card = finalize(draft, "Same card", rules)
                payload = card.to_dict()
                for key in ("id", "created_at", "updated_at"):
                    payload.pop(key)
                payloads.add(repr(payload))
            assert len(payloads) == 1


class TestDraftSafety:
    def test_random_step_walks_never_break_invariants(self, rules):
        # Any sequence of steps, valid or not, must leave a draft whose
        # binding (when present) has its idiom and table set and validates.
        r = random.Random(41)
        for _ in range(60):
            draft = start_draft(rand_goal_question(r, r.randint(2, 4)))
            for _ in range(r.randint(3, 15)):
                roll = r.random()
                if roll < 0.2:
                    step = SetTask(r.choice([None, *TaskType]))
                elif roll < 0.4:
                    step = SetIdiom(r.choice(list(IdiomType)))
                elif roll < 0.55:
                    idiom = r.choice(list(IdiomType))
                    step = SetTable(table_for_idiom(r, idiom, rules))
                elif roll < 0.7 and draft.idiom and draft.table:
                    binding = binding_for(r, draft.idiom, draft.table, rules)
                    if binding is None:
                        continue
                    step = SetBinding(binding)
                elif roll < 0.85:
                    step = ClearTask()
                else:
                    step = ClearIdiom()
                before = draft
                try:
                    draft = apply_step(draft, step, rules)
                except StepError:
                    draft = before  # rejected steps leave the draft unchanged
                if draft.binding is not None:
                    assert draft.idiom is not None and draft.table is not None
                    assert (
                        validate_binding(draft.idiom, draft.table, draft.binding, rules)
                        == []
                    )
                assert len(draft.step_log) <= 200


class TestDraftJson:
    def test_round_trip(self, rules):
        draft = start_draft(GQ)
        draft = choose_path(draft, PathChoice.DATASET)
        draft = apply_step(draft, SetIdiom(IdiomType.BAR_CHART), rules)
        draft = apply_step(draft, SetTable(TABLE), rules)
        draft = apply_step(draft, SetBinding(BINDING), rules)
        assert parse_draft(serialize_draft(draft)) == draft

    def test_binding_without_idiom_rejected(self):
        draft = start_draft(GQ)
        doc = draft.to_dict()
        doc["binding"] = BINDING.to_dict()
        doc["table"] = TABLE.to_dict()
        import json

        from indicards.errors import ModelError

        with pytest.raises(ModelError):
            parse_draft(json.dumps(doc))
