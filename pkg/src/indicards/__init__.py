"""Authoring toolkit for learning-analytics indicator specification cards:
typed data tables, rule-based chart recommendations, a flexible draft
workflow, durable card storage, and card/SVG rendering behind an HTTP API.
"""

from .errors import IndicardsError, Violation
from .model import (
    AxisBinding,
    Column,
    DataRequirement,
    DataSignature,
    DataTable,
    DataType,
    GoalQuestion,
    IdiomType,
    IndicatorSpecificationCard,
    Labels,
    TaskType,
    parse_card,
    serialize_card,
    validate_goal_question,
)
from .recommend import (
    IdiomRule,
    Recommendation,
    axis_candidates,
    default_rules,
    load_rules_file,
    recommend_idioms,
    satisfies,
    signature_of,
    validate_binding,
)
from .ingest import (
    edit_table,
    infer_column_type,
    parse_csv,
    prepopulate_table,
    serialize_csv,
)
from .workflow import (
    Draft,
    PathChoice,
    apply_step,
    choose_path,
    finalize,
    next_recommendations,
    start_draft,
)
from .render import build_chart_spec, export_card_json, render_card
from .svg import export_chart_svg
from .store import CardStore

__version__ = "0.1.0"
