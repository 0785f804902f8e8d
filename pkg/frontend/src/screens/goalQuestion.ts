// "Specify your goal and question": goal, question, idea, and the planned
// data (name + type, at least two entries). Client-side hints mirror the
// server's validation; the server report is surfaced inline on submit.

import { api, ApiFailure, describeError } from "../api";
import { store } from "../store";
import type { DType, Requirement } from "../types";

const DTYPE_OPTIONS: { value: DType; label: string }[] = [
  { value: "categorical", label: "categorical" },
  { value: "numerical", label: "numerical" },
  { value: "categorical_ordered", label: "categorical (ordered)" },
];

function requirementRow(req: Requirement): HTMLElement {
  const row = document.createElement("div");
  row.className = "req-row";
  const name = document.createElement("input");
  name.className = "req-name";
  name.placeholder = "data name, e.g. grade";
  name.value = req.name;
  const dtype = document.createElement("select");
  dtype.className = "req-dtype";
  for (const opt of DTYPE_OPTIONS) {
    const o = document.createElement("option");
    o.value = opt.value;
    o.textContent = opt.label;
    dtype.appendChild(o);
  }
  dtype.value = req.dtype;
  const remove = document.createElement("button");
  remove.textContent = "✕";
  remove.className = "remove-req";
  remove.addEventListener("click", () => row.remove());
  row.append(name, dtype, remove);
  return row;
}

export function renderGoalQuestion(root: HTMLElement): void {
  root.innerHTML = `
    <section class="goal-form">
      <h2>Specify your goal and question</h2>
      <label>Goal
        <textarea id="goal" rows="2" placeholder="e.g. monitor my grades"></textarea>
      </label>
      <label>Question
        <textarea id="question" rows="2" placeholder="e.g. how are grades distributed?"></textarea>
      </label>
      <label>Idea for the indicator (optional)
        <textarea id="idea" rows="2"></textarea>
      </label>
      <fieldset>
        <legend>Data needed for this indicator (minimum of two)</legend>
        <div id="requirements"></div>
        <button id="add-req">ADD DATA</button>
        <p class="hint" id="req-hint"></p>
      </fieldset>
      <p class="error" id="form-errors"></p>
      <div class="form-actions">
        <button id="cancel">Back to dashboard</button>
        <button class="primary" id="continue">CONTINUE</button>
      </div>
    </section>
  `;

  const current = store.get().draft?.goal_question;
  if (current) {
    root.querySelector<HTMLTextAreaElement>("#goal")!.value = current.goal;
    root.querySelector<HTMLTextAreaElement>("#question")!.value = current.question;
    root.querySelector<HTMLTextAreaElement>("#idea")!.value = current.idea;
  }

  const reqBox = root.querySelector<HTMLElement>("#requirements")!;
  const existing = current?.requirements ?? [
    { name: "", dtype: "categorical" as DType },
    { name: "", dtype: "numerical" as DType },
  ];
  for (const req of existing) {
    reqBox.appendChild(requirementRow(req));
  }
  root.querySelector("#add-req")!.addEventListener("click", () => {
    reqBox.appendChild(requirementRow({ name: "", dtype: "categorical" }));
  });
  root.querySelector("#cancel")!.addEventListener("click", () => store.reset());

  const hint = root.querySelector<HTMLElement>("#req-hint")!;
  const errors = root.querySelector<HTMLElement>("#form-errors")!;

  root.querySelector("#continue")!.addEventListener("click", async () => {
    errors.textContent = "";
    const requirements: Requirement[] = [...reqBox.querySelectorAll(".req-row")].map(
      (row) => ({
        name: row.querySelector<HTMLInputElement>(".req-name")!.value.trim(),
        dtype: row.querySelector<HTMLSelectElement>(".req-dtype")!.value as DType,
      }),
    );
    const filled = requirements.filter((r) => r.name);
    if (filled.length < 2) {
      hint.textContent = `Need at least 2 named data entries, found ${filled.length}.`;
      return;
    }
    hint.textContent = "";
    try {
      const previous = store.get().draft;
      const draft = await api.createDraft({
        goal: root.querySelector<HTMLTextAreaElement>("#goal")!.value,
        question: root.querySelector<HTMLTextAreaElement>("#question")!.value,
        idea: root.querySelector<HTMLTextAreaElement>("#idea")!.value,
        requirements: filled,
      });
      if (previous) {
        // Changing the goal restarts the draft; drop the superseded one.
        void api.deleteDraft(previous.id).catch(() => undefined);
      }
      store.set({ draft, screen: "path", notice: null });
    } catch (err) {
      if (err instanceof ApiFailure) {
        errors.textContent = err.body.details
          .map((d) => `${d.path}: ${d.message}`)
          .join(" · ");
      } else {
        errors.textContent = describeError(err);
      }
    }
  });
}
