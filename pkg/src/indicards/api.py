"""The JSON-over-HTTP service boundary.

All state lives in the card store; every response is a function of the
request, the store contents, and the rules table. Error bodies are always
``{code, message, details[]}`` with field paths in the details.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence, Union

from fastapi import Body, FastAPI, File, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import workflow
from .errors import IndicardsError, ValidationFailure, VersionConflictError, Violation
from .ingest import edit_table, parse_csv, parse_edit
from .model import (
    TASK_DESCRIPTIONS,
    IdiomType,
    TaskType,
    card_from_dict,
    goal_question_from_dict,
    parse_enum,
)
from .recommend import (
    IdiomRule,
    default_rules,
    rule_for,
    signature_of,
    axis_candidates,
    validate_binding,
)
from .render import build_chart_spec, export_card_json, render_card
from .store import CardStore
from .svg import export_chart_svg
from .workflow import Draft, PathChoice

ERROR_STATUS = {
    "invalid_model": 400,
    "validation": 400,
    "step": 400,
    "finalize": 400,
    "edit": 400,
    "unknown_idiom": 400,
    "csv": 422,
    "chart_data": 422,
    "too_large": 413,
    "not_found": 404,
    "duplicate_id": 409,
    "version_conflict": 409,
    "storage": 500,
    "rules": 500,
    "internal": 500,
}


def create_app(
    data_dir: Union[str, Path],
    rules: Optional[Sequence[IdiomRule]] = None,
    static_dir: Optional[Union[str, Path]] = None,
) -> FastAPI:
    rules = tuple(rules) if rules is not None else default_rules()
    store = CardStore(data_dir)

    app = FastAPI(title="indicards", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.rules = rules
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(IndicardsError)
    async def on_error(_request: Request, exc: IndicardsError):
        body = {
            "code": exc.code,
            "message": str(exc),
            "details": exc.detail_dicts(),
        }
        if isinstance(exc, VersionConflictError):
            body["current_version"] = exc.current_version
        return JSONResponse(status_code=ERROR_STATUS.get(exc.code, 500), content=body)

    @app.exception_handler(RequestValidationError)
    async def on_request_error(_request: Request, exc: RequestValidationError):
        details = [
            {
                "path": ".".join(str(part) for part in err.get("loc", ()) if part != "body"),
                "message": err.get("msg", "invalid"),
            }
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_model", "message": "invalid request body", "details": details},
        )

    # -- helpers -----------------------------------------------------------

    def draft_response(draft: Draft) -> dict:
        doc = draft.to_dict()
        doc["next_steps"] = workflow.next_steps(draft)
        if draft.table is None:
            table, _ = workflow.suggested_table(draft)
            doc["suggested_table"] = table.to_dict()
        else:
            doc["suggested_table"] = None
        return doc

    def checked_card(raw: object):
        """Parse a full card payload and enforce channel constraints."""
        card = card_from_dict(raw)
        report = validate_binding(card.idiom, card.table, card.binding, rules)
        if report:
            raise ValidationFailure("binding violates idiom channel constraints", report)
        return card

    # -- health ------------------------------------------------------------

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    # -- meta --------------------------------------------------------------

    @app.get("/api/meta/tasks")
    def meta_tasks():
        return {
            "tasks": [
                {"id": t.value, "label": t.label, "description": TASK_DESCRIPTIONS[t]}
                for t in TaskType
            ]
        }

    @app.get("/api/meta/idioms")
    def meta_idioms():
        ordered = sorted(rules, key=lambda r: r.idiom.order)
        return {
            "idioms": [
                {
                    "id": r.idiom.value,
                    "label": r.idiom.label,
                    "description": r.description,
                    "requires": f"requires {r.describe_requirement()}",
                    "tasks": sorted(t.value for t in r.tasks),
                    "thumbnail": r.idiom.value,
                }
                for r in ordered
            ]
        }

    @app.get("/api/meta/rules")
    def meta_rules():
        return {"rules": [r.to_dict() for r in rules]}

    # -- drafts ------------------------------------------------------------

    @app.post("/api/drafts", status_code=201)
    def create_draft(payload: dict = Body(...)):
        gq = goal_question_from_dict(payload, "")
        draft = workflow.start_draft(gq)
        store.save_draft(draft)
        return draft_response(draft)

    @app.get("/api/drafts/{draft_id}")
    def get_draft(draft_id: str):
        return draft_response(store.get_draft(draft_id))

    @app.delete("/api/drafts/{draft_id}", status_code=204)
    def delete_draft(draft_id: str):
        store.delete_draft(draft_id)
        return Response(status_code=204)

    @app.post("/api/drafts/{draft_id}/path")
    def set_path(draft_id: str, payload: dict = Body(...)):
        path = parse_enum(PathChoice, payload.get("path"), "path")
        with store.draft_lock(draft_id):
            draft = workflow.choose_path(store.get_draft(draft_id), path)
            store.save_draft(draft)
        return draft_response(draft)

    @app.post("/api/drafts/{draft_id}/steps")
    def apply_step(draft_id: str, payload: dict = Body(...)):
        step = workflow.parse_step(payload)
        with store.draft_lock(draft_id):
            draft = workflow.apply_step(store.get_draft(draft_id), step, rules)
            store.save_draft(draft)
        return draft_response(draft)

    @app.get("/api/drafts/{draft_id}/recommendations")
    def draft_recommendations(draft_id: str):
        draft = store.get_draft(draft_id)
        if draft.table is not None:
            signature = signature_of(draft.table)
            source = "table"
        else:
            signature = signature_of(draft.goal_question.requirements)
            source = "requirements"
        recs = workflow.next_recommendations(draft, rules)
        return {
            "task": draft.task.value if draft.task else None,
            "signature": signature.to_dict(),
            "signature_source": source,
            "recommendations": [r.to_dict() for r in recs],
        }

    @app.get("/api/drafts/{draft_id}/axis-candidates")
    def draft_axis_candidates(draft_id: str, idiom: str):
        draft = store.get_draft(draft_id)
        idiom_value = parse_enum(IdiomType, idiom, "idiom")
        table, prepopulated = workflow.suggested_table(draft)
        candidates = axis_candidates(idiom_value, table, rules)
        rule = rule_for(idiom_value, rules)
        return {
            "idiom": idiom_value.value,
            "x": candidates["x"],
            "y": candidates["y"],
            "y_arity": rule.channel_spec.y_arity,
            "prepopulated": prepopulated,
        }

    @app.post("/api/drafts/{draft_id}/table:upload")
    async def upload_table(draft_id: str, file: UploadFile = File(...)):
        data = await file.read()
        table = parse_csv(data)
        with store.draft_lock(draft_id):
            draft = workflow.apply_step(
                store.get_draft(draft_id), workflow.SetTable(table), rules
            )
            store.save_draft(draft)
        return draft_response(draft)

    @app.post("/api/drafts/{draft_id}/table/edits")
    def edit_draft_table(draft_id: str, payload: dict = Body(...)):
        edit = parse_edit(payload)
        with store.draft_lock(draft_id):
            draft = store.get_draft(draft_id)
            base, _ = workflow.suggested_table(draft)
            table = edit_table(base, edit)
            draft = workflow.apply_step(draft, workflow.SetTable(table), rules)
            store.save_draft(draft)
        return draft_response(draft)

    @app.post("/api/drafts/{draft_id}/finalize", status_code=201)
    def finalize_draft(draft_id: str, payload: dict = Body(...)):
        name = payload.get("name")
        if not isinstance(name, str):
            raise ValidationFailure(
                "name must be a string",
                [Violation("name", "must be a string")],
            )
        with store.draft_lock(draft_id):
            draft = store.get_draft(draft_id)
            card = workflow.finalize(draft, name, rules)
            stored = store.save_card(card)
        return stored.to_dict()

    # -- cards ---------------------------------------------------------------

    @app.get("/api/cards")
    def list_cards():
        return {"cards": [s.to_dict() for s in store.list_cards()]}

    @app.post("/api/cards", status_code=201)
    def import_card(payload: dict = Body(...)):
        card = checked_card(payload)
        return store.save_card(card).to_dict()

    @app.get("/api/cards/{card_id}")
    def get_card(card_id: str):
        return store.get_card(card_id).to_dict()

    @app.put("/api/cards/{card_id}")
    def update_card(card_id: str, payload: dict = Body(...)):
        content = checked_card(payload)
        return store.update_card(card_id, content, expected_version=content.version).to_dict()

    @app.delete("/api/cards/{card_id}", status_code=204)
    def delete_card(card_id: str):
        store.delete_card(card_id)
        return Response(status_code=204)

    @app.post("/api/cards/{card_id}/duplicate", status_code=201)
    def duplicate_card(card_id: str):
        return store.duplicate_card(card_id).to_dict()

    @app.get("/api/cards/{card_id}/card-document")
    def card_document(card_id: str):
        return render_card(store.get_card(card_id)).to_dict()

    @app.get("/api/cards/{card_id}/chart-spec")
    def chart_spec(card_id: str):
        return build_chart_spec(store.get_card(card_id)).to_dict()

    @app.get("/api/cards/{card_id}/export")
    def export_card(card_id: str, format: str = "json"):
        card = store.get_card(card_id)
        stem = f"indicator-{card.id[:8]}"
        if format == "json":
            return Response(
                content=export_card_json(card),
                media_type="application/json",
                headers={"Content-Disposition": f'attachment; filename="{stem}.json"'},
            )
        if format == "svg":
            svg = export_chart_svg(build_chart_spec(card))
            return Response(
                content=svg,
                media_type="image/svg+xml",
                headers={"Content-Disposition": f'attachment; filename="{stem}.svg"'},
            )
        raise ValidationFailure(
            f"unknown export format {format!r}",
            [Violation("format", "must be 'json' or 'svg'")],
        )

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
