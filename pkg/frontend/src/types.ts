// DTOs mirroring the backend's JSON. The UI never derives these itself.

export type DType = "categorical" | "numerical" | "categorical_ordered";

export interface Requirement {
  name: string;
  dtype: DType;
}

export interface GoalQuestion {
  goal: string;
  question: string;
  idea: string;
  requirements: Requirement[];
}

export interface ColumnDto {
  name: string;
  dtype: DType;
  values: string[];
}

export interface TableDto {
  columns: ColumnDto[];
  row_count: number;
}

export interface LabelsDto {
  title: string;
  x_label: string;
  y_label: string;
}

export interface BindingDto {
  x_column: string;
  y_columns: string[];
  labels: LabelsDto;
}

export interface DraftDto {
  id: string;
  goal_question: GoalQuestion;
  path: "visualization" | "dataset" | null;
  task: string | null;
  idiom: string | null;
  table: TableDto | null;
  binding: BindingDto | null;
  step_log: string[];
  warnings: string[];
  next_steps: string[];
  suggested_table: TableDto | null;
}

export interface CardDto {
  id: string;
  name: string;
  goal_question: GoalQuestion;
  task: string | null;
  idiom: string;
  table: TableDto;
  binding: BindingDto;
  created_at: string;
  updated_at: string;
  version: number;
}

export interface CardSummary {
  id: string;
  name: string;
  idiom: string;
  task: string | null;
  updated_at: string;
}

export interface Recommendation {
  idiom: string;
  task_fit: boolean;
  data_fit: boolean;
  rank: number;
  provenance: string;
}

export interface RecommendationsResponse {
  task: string | null;
  signature: Record<string, number>;
  signature_source: "table" | "requirements";
  recommendations: Recommendation[];
}

export interface AxisCandidates {
  idiom: string;
  x: string[];
  y: string[];
  y_arity: "one" | "many";
  prepopulated: boolean;
}

export interface TaskMeta {
  id: string;
  label: string;
  description: string;
}

export interface IdiomMeta {
  id: string;
  label: string;
  description: string;
  requires: string;
  tasks: string[];
  thumbnail: string;
}

export interface SeriesDto {
  name: string;
  points: (number | null)[];
}

export interface ChartSpecDto {
  idiom: string;
  categories: string[];
  series: SeriesDto[];
  labels: LabelsDto;
}

export interface CardDocumentDto {
  sections: { heading: string; body: string }[];
  chart_spec: ChartSpecDto;
  table: {
    columns: { name: string; dtype: DType }[];
    row_count: number;
    rows: string[][] | null;
  };
}

export interface ErrorDetail {
  path: string;
  message: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details: ErrorDetail[];
  current_version?: number;
}

export type TableEdit =
  | { op: "add_row" }
  | { op: "add_column"; name: string; dtype: DType }
  | { op: "remove_row"; index: number }
  | { op: "remove_column"; name: string }
  | { op: "set_cell"; row: number; column: string; text: string }
  | { op: "set_column_type"; name: string; dtype: DType }
  | { op: "rename_column"; old: string; new: string };

export type DraftStep =
  | { type: "set_task"; task: string | null }
  | { type: "set_idiom"; idiom: string }
  | { type: "set_table"; table: TableDto }
  | { type: "set_binding"; binding: BindingDto }
  | { type: "clear_task" }
  | { type: "clear_idiom" };
