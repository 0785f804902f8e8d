// Finalize: bind columns to axes (candidates come from the server), name the
// indicator, watch the live preview, and save. Editing a cell here re-renders
// the preview immediately.

import { api, ApiFailure, describeError } from "../api";
import { renderChart } from "../chart";
import { store } from "../store";
import type { BindingDto, CardDto, ChartSpecDto, DraftDto } from "../types";
import { renderTableEditor } from "./dataEditor";

const nameMemory = new Map<string, string>();

function parseCell(text: string): number | null {
  const t = text.trim();
  if (!t) return null;
  const v = Number(t);
  return Number.isFinite(v) ? v : null;
}

// Pure transcription of the draft's table through the chosen binding; all
// validation of the binding itself happens server-side.
function draftSpec(draft: DraftDto, binding: BindingDto, name: string): ChartSpecDto | null {
  const table = draft.table ?? draft.suggested_table;
  if (!draft.idiom || !table) return null;
  const xCol = table.columns.find((c) => c.name === binding.x_column);
  if (!xCol) return null;
  const series = [];
  for (const yName of binding.y_columns) {
    const col = table.columns.find((c) => c.name === yName);
    if (!col) return null;
    series.push({ name: yName, points: col.values.map(parseCell) });
  }
  return {
    idiom: draft.idiom,
    categories: xCol.values,
    series,
    labels: {
      title: binding.labels.title || name || "Untitled indicator",
      x_label: binding.labels.x_label || binding.x_column,
      y_label: binding.labels.y_label || binding.y_columns.join(", "),
    },
  };
}

export function renderFinalize(root: HTMLElement): void {
  const state = store.get();
  const draft = state.draft;
  if (!draft) {
    store.set({ screen: "goal" });
    return;
  }
  if (!draft.idiom) {
    root.innerHTML = `
      <section class="finalize">
        <h2>Finalize the indicator</h2>
        <p class="hint">Choose a chart first.</p>
        <button id="go-gallery" class="primary">Open chart gallery</button>
      </section>
    `;
    root.querySelector("#go-gallery")!.addEventListener("click", () =>
      store.set({ screen: "gallery" }),
    );
    return;
  }

  root.innerHTML = `
    <section class="finalize">
      <h2>Finalize the indicator</h2>
      <div class="finalize-grid">
        <div class="finalize-controls">
          <label>Indicator name
            <input id="card-name" placeholder="e.g. Grade distribution" />
          </label>
          <label>X axis <select id="x-axis"></select></label>
          <div id="y-axis-box"><span class="label">Y axis</span></div>
          <label>Chart title <input id="label-title" /></label>
          <label>X label <input id="label-x" /></label>
          <label>Y label <input id="label-y" /></label>
          <p class="error" id="finalize-error"></p>
          <p class="hint" id="finalize-warnings"></p>
          <button class="primary" id="save-card">${state.editingCard ? "SAVE CHANGES" : "SAVE TO DASHBOARD"}</button>
        </div>
        <div class="finalize-preview">
          <div id="chart-preview" class="chart-preview"></div>
          <details open>
            <summary>Data</summary>
            <div id="finalize-table"></div>
          </details>
        </div>
      </div>
    </section>
  `;

  const nameInput = root.querySelector<HTMLInputElement>("#card-name")!;
  nameInput.value = nameMemory.get(draft.id) ?? state.editingCard?.name ?? "";
  nameInput.addEventListener("input", () => nameMemory.set(draft.id, nameInput.value));
  const xSelect = root.querySelector<HTMLSelectElement>("#x-axis")!;
  const yBox = root.querySelector<HTMLElement>("#y-axis-box")!;
  const titleInput = root.querySelector<HTMLInputElement>("#label-title")!;
  const xLabelInput = root.querySelector<HTMLInputElement>("#label-x")!;
  const yLabelInput = root.querySelector<HTMLInputElement>("#label-y")!;
  const errorBox = root.querySelector<HTMLElement>("#finalize-error")!;
  const warningsBox = root.querySelector<HTMLElement>("#finalize-warnings")!;
  const preview = root.querySelector<HTMLElement>("#chart-preview")!;

  renderTableEditor(root.querySelector<HTMLElement>("#finalize-table")!, { compact: true });
  if (draft.warnings.length) {
    warningsBox.textContent = draft.warnings.join(" · ");
  }
  if (draft.binding) {
    titleInput.value = draft.binding.labels.title;
    xLabelInput.value = draft.binding.labels.x_label;
    yLabelInput.value = draft.binding.labels.y_label;
  }

  let yArity: "one" | "many" = "one";

  const currentBinding = (): BindingDto | null => {
    const x = xSelect.value;
    const ys = [...yBox.querySelectorAll<HTMLInputElement>("input:checked")].map(
      (el) => el.value,
    );
    if (yArity === "one" && ys.length > 1) return null;
    if (!x || !ys.length) return null;
    return {
      x_column: x,
      y_columns: ys,
      labels: {
        title: titleInput.value,
        x_label: xLabelInput.value,
        y_label: yLabelInput.value,
      },
    };
  };

  const repaint = () => {
    const binding = currentBinding();
    const liveDraft = store.get().draft ?? draft;
    if (!binding) {
      preview.innerHTML = `<p class="hint">Pick an x column and at least one y column to preview.</p>`;
      return;
    }
    const spec = draftSpec(liveDraft, binding, nameInput.value);
    if (spec) renderChart(preview, spec);
  };

  const pushBinding = async () => {
    const binding = currentBinding();
    errorBox.textContent = "";
    if (!binding) return;
    const current = store.get().draft?.binding;
    if (current && JSON.stringify(current) === JSON.stringify(binding)) return;
    try {
      const updated = await api.applyStep(store.get().draft!.id, {
        type: "set_binding",
        binding,
      });
      store.set({ draft: updated });
    } catch (err) {
      errorBox.textContent = describeError(err);
    }
  };

  void api
    .axisCandidates(draft.id, draft.idiom)
    .then((candidates) => {
      yArity = candidates.y_arity;
      xSelect.innerHTML = "";
      for (const name of candidates.x) {
        const opt = document.createElement("option");
        opt.value = name;
        opt.textContent = name;
        xSelect.appendChild(opt);
      }
      if (draft.binding && candidates.x.includes(draft.binding.x_column)) {
        xSelect.value = draft.binding.x_column;
      }
      const multi = candidates.y_arity === "many";
      const chosen = new Set(draft.binding?.y_columns ?? candidates.y.slice(0, 1));
      for (const name of candidates.y) {
        const label = document.createElement("label");
        label.className = "y-option";
        const input = document.createElement("input");
        input.type = multi ? "checkbox" : "radio";
        input.name = "y-axis";
        input.value = name;
        input.checked = chosen.has(name);
        input.addEventListener("change", () => {
          repaint();
          void pushBinding();
        });
        label.append(input, document.createTextNode(` ${name}`));
        yBox.appendChild(label);
      }
      if (!candidates.x.length || !candidates.y.length) {
        errorBox.textContent =
          "The current table has no columns eligible for this chart's axes; adjust the data or pick another chart.";
      }
      repaint();
      void pushBinding();
    })
    .catch((err) => {
      errorBox.textContent = describeError(err);
    });

  xSelect.addEventListener("change", () => {
    repaint();
    void pushBinding();
  });
  for (const input of [titleInput, xLabelInput, yLabelInput, nameInput]) {
    input.addEventListener("input", repaint);
    input.addEventListener("change", () => void pushBinding());
  }

  root.querySelector("#save-card")!.addEventListener("click", async () => {
    errorBox.textContent = "";
    const liveDraft = store.get().draft!;
    const editing = store.get().editingCard;
    try {
      let card: CardDto;
      if (editing) {
        const binding = currentBinding() ?? liveDraft.binding;
        if (!liveDraft.idiom || !liveDraft.table || !binding) {
          errorBox.textContent = "Chart, data, and axis binding are all needed before saving.";
          return;
        }
        card = await api.updateCard(editing.id, {
          id: editing.id,
          name: nameInput.value,
          goal_question: liveDraft.goal_question,
          task: liveDraft.task,
          idiom: liveDraft.idiom,
          table: liveDraft.table,
          binding,
          created_at: editing.createdAt,
          updated_at: editing.createdAt,
          version: editing.version,
        });
        await api.deleteDraft(liveDraft.id);
      } else {
        card = await api.finalize(liveDraft.id, nameInput.value);
      }
      store.set({
        previewCardId: card.id,
        screen: "preview",
        draft: null,
        editingCard: null,
        notice: `Saved "${card.name}"`,
      });
    } catch (err) {
      if (err instanceof ApiFailure) {
        errorBox.textContent = err.body.details
          .map((d) => `${d.path}: ${d.message}`)
          .join(" · ") || err.body.message;
      } else {
        errorBox.textContent = describeError(err);
      }
    }
  });
}
