// Saved-card dashboard: list, create new, edit, duplicate, delete, export.

import { api, describeError } from "../api";
import { store } from "../store";
import type { CardDto, CardSummary } from "../types";

function download(url: string, filename: string): void {
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  document.body.appendChild(a);
  a.click();
  a.remove();
}

async function reopenAsDraft(card: CardDto): Promise<void> {
  // Editing reuses the authoring flow: rebuild a draft from the card through
  // the same step endpoints, then finalize performs an update.
  let draft = await api.createDraft(card.goal_question);
  if (card.task) {
    draft = await api.applyStep(draft.id, { type: "set_task", task: card.task });
  }
  draft = await api.applyStep(draft.id, { type: "set_idiom", idiom: card.idiom });
  draft = await api.applyStep(draft.id, { type: "set_table", table: card.table });
  draft = await api.applyStep(draft.id, { type: "set_binding", binding: card.binding });
  store.set({
    draft,
    editingCard: { id: card.id, name: card.name, version: card.version, createdAt: card.created_at },
    screen: "finalize",
    notice: `Editing "${card.name}"`,
  });
}

function row(summary: CardSummary, refresh: () => void): HTMLElement {
  const tr = document.createElement("tr");
  tr.dataset.cardId = summary.id;
  const idiomLabel = summary.idiom.replace(/_/g, " ");
  tr.innerHTML = `
    <td class="card-name">${summary.name}</td>
    <td>${idiomLabel}</td>
    <td>${summary.task ?? "—"}</td>
    <td class="muted">${summary.updated_at.slice(0, 16).replace("T", " ")}</td>
  `;
  const actions = document.createElement("td");
  actions.className = "actions";

  const add = (label: string, cls: string, onClick: () => void) => {
    const btn = document.createElement("button");
    btn.textContent = label;
    btn.className = cls;
    btn.addEventListener("click", onClick);
    actions.appendChild(btn);
    return btn;
  };

  add("Preview", "preview-card", () => {
    store.set({ previewCardId: summary.id, screen: "preview" });
  });
  add("Edit", "edit-card", async () => {
    try {
      await reopenAsDraft(await api.getCard(summary.id));
    } catch (err) {
      store.set({ notice: describeError(err) });
    }
  });
  add("Duplicate", "duplicate-card", async () => {
    try {
      await api.duplicateCard(summary.id);
      refresh();
    } catch (err) {
      store.set({ notice: describeError(err) });
    }
  });
  add("Delete", "delete-card", async () => {
    tr.remove(); // optimistic; the server confirms on refetch
    try {
      await api.deleteCard(summary.id);
    } finally {
      refresh();
    }
  });
  add("JSON", "export-json", () =>
    download(api.exportUrl(summary.id, "json"), `${summary.name}.json`),
  );
  add("SVG", "export-svg", () =>
    download(api.exportUrl(summary.id, "svg"), `${summary.name}.svg`),
  );
  tr.appendChild(actions);
  return tr;
}

export function renderDashboard(root: HTMLElement): void {
  root.innerHTML = `
    <section class="dashboard">
      <div class="dashboard-head">
        <h2>Indicator dashboard</h2>
        <button class="primary" id="create-new">CREATE NEW</button>
      </div>
      <div id="card-list"><p class="muted">Loading…</p></div>
    </section>
  `;
  root.querySelector("#create-new")!.addEventListener("click", () => {
    store.set({ screen: "goal", draft: null, editingCard: null, notice: null });
  });

  const list = root.querySelector<HTMLElement>("#card-list")!;
  const refresh = () => {
    void api
      .listCards()
      .then((cards) => {
        if (!cards.length) {
          list.innerHTML = `<p class="muted empty-dashboard">No indicators yet. Create one to get started.</p>`;
          return;
        }
        list.innerHTML = `
          <table class="card-table">
            <thead><tr><th>Name</th><th>Chart</th><th>Task</th><th>Updated</th><th></th></tr></thead>
            <tbody></tbody>
          </table>
        `;
        const tbody = list.querySelector("tbody")!;
        for (const summary of cards) {
          tbody.appendChild(row(summary, refresh));
        }
      })
      .catch((err) => {
        list.innerHTML = `<p class="error">${describeError(err)}</p>`;
      });
  };
  refresh();
}
