// Thin typed client over the backend API. Tests point it at a live server
// by setting globalThis.__API_BASE__; the built app talks same-origin (or
// through the vite dev proxy).

import type {
  ApiErrorBody,
  AxisCandidates,
  CardDocumentDto,
  CardDto,
  CardSummary,
  ChartSpecDto,
  DraftDto,
  DraftStep,
  GoalQuestion,
  IdiomMeta,
  RecommendationsResponse,
  TableEdit,
  TaskMeta,
} from "./types";

export class ApiFailure extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

function base(): string {
  return (globalThis as { __API_BASE__?: string }).__API_BASE__ ?? "";
}

async function request<T>(method: string, path: string, body?: unknown): Promise<T> {
  const init: RequestInit = { method };
  if (body !== undefined) {
    init.headers = { "Content-Type": "application/json" };
    init.body = JSON.stringify(body);
  }
  const resp = await fetch(base() + path, init);
  if (!resp.ok) {
    let parsed: ApiErrorBody;
    try {
      parsed = (await resp.json()) as ApiErrorBody;
    } catch {
      parsed = { code: "http", message: `HTTP ${resp.status}`, details: [] };
    }
    throw new ApiFailure(resp.status, parsed);
  }
  if (resp.status === 204) {
    return undefined as T;
  }
  return (await resp.json()) as T;
}

export const api = {
  health: () => request<{ status: string }>("GET", "/api/health"),

  metaTasks: async () => (await request<{ tasks: TaskMeta[] }>("GET", "/api/meta/tasks")).tasks,
  metaIdioms: async () =>
    (await request<{ idioms: IdiomMeta[] }>("GET", "/api/meta/idioms")).idioms,

  listCards: async () =>
    (await request<{ cards: CardSummary[] }>("GET", "/api/cards")).cards,
  getCard: (id: string) => request<CardDto>("GET", `/api/cards/${id}`),
  updateCard: (id: string, card: CardDto) => request<CardDto>("PUT", `/api/cards/${id}`, card),
  deleteCard: (id: string) => request<void>("DELETE", `/api/cards/${id}`),
  duplicateCard: (id: string) => request<CardDto>("POST", `/api/cards/${id}/duplicate`),
  cardDocument: (id: string) => request<CardDocumentDto>("GET", `/api/cards/${id}/card-document`),
  chartSpec: (id: string) => request<ChartSpecDto>("GET", `/api/cards/${id}/chart-spec`),
  exportUrl: (id: string, format: "json" | "svg") =>
    `${base()}/api/cards/${id}/export?format=${format}`,

  createDraft: (gq: GoalQuestion) => request<DraftDto>("POST", "/api/drafts", gq),
  getDraft: (id: string) => request<DraftDto>("GET", `/api/drafts/${id}`),
  deleteDraft: (id: string) => request<void>("DELETE", `/api/drafts/${id}`),
  setPath: (id: string, path: "visualization" | "dataset") =>
    request<DraftDto>("POST", `/api/drafts/${id}/path`, { path }),
  applyStep: (id: string, step: DraftStep) =>
    request<DraftDto>("POST", `/api/drafts/${id}/steps`, step),
  recommendations: (id: string) =>
    request<RecommendationsResponse>("GET", `/api/drafts/${id}/recommendations`),
  axisCandidates: (id: string, idiom: string) =>
    request<AxisCandidates>(
      "GET",
      `/api/drafts/${id}/axis-candidates?idiom=${encodeURIComponent(idiom)}`,
    ),
  editTable: (id: string, edit: TableEdit) =>
    request<DraftDto>("POST", `/api/drafts/${id}/table/edits`, edit),
  finalize: (id: string, name: string) =>
    request<CardDto>("POST", `/api/drafts/${id}/finalize`, { name }),

  // Multipart built by hand: works identically in browsers and jsdom tests.
  uploadCsv: async (id: string, filename: string, content: string): Promise<DraftDto> => {
    const boundary = "----indicards" + Math.random().toString(16).slice(2);
    const safeName = filename.replace(/"/g, "'");
    const body =
      `--${boundary}\r\n` +
      `Content-Disposition: form-data; name="file"; filename="${safeName}"\r\n` +
      `Content-Type: text/csv\r\n\r\n` +
      content +
      `\r\n--${boundary}--\r\n`;
    const resp = await fetch(`${base()}/api/drafts/${id}/table:upload`, {
      method: "POST",
      headers: { "Content-Type": `multipart/form-data; boundary=${boundary}` },
      body,
    });
    if (!resp.ok) {
      throw new ApiFailure(resp.status, (await resp.json()) as ApiErrorBody);
    }
    return (await resp.json()) as DraftDto;
  },

  importCard: (card: CardDto) => request<CardDto>("POST", "/api/cards", card),
};

export function describeError(err: unknown): string {
  if (err instanceof ApiFailure) {
    const details = err.body.details.map((d) => `${d.path}: ${d.message}`).join("; ");
    return details ? `${err.body.message} (${details})` : err.body.message;
  }
  return err instanceof Error ? err.message : String(err);
}
