// Task and chart galleries. Every badge, rank, and provenance string shown
// here is taken verbatim from the recommendations endpoint; the gallery
// only lays them out.

import { api, describeError } from "../api";
import { store } from "../store";
import type { IdiomMeta, Recommendation } from "../types";

const THUMBS: Record<string, string> = {
  bar_chart: "▂▆▃█",
  grouped_bar_chart: "▆▂ █▃",
  stacked_bar_chart: "▙▟",
  line_chart: "⟋⟍⟋",
  area_chart: "◢◣◢",
  pie_chart: "◕",
  donut_chart: "◎",
  scatter_plot: "∴∵",
  histogram: "▁▃▇▃▁",
  box_plot: "⊟",
  heatmap: "▦",
};

async function refreshRecommendations(): Promise<Recommendation[]> {
  const draft = store.get().draft;
  if (!draft) return [];
  const response = await api.recommendations(draft.id);
  return response.recommendations;
}

function idiomCard(
  meta: IdiomMeta,
  rec: Recommendation | undefined,
  selected: boolean,
  onSelect: (id: string) => void,
): HTMLElement {
  const card = document.createElement("button");
  card.className = "idiom-card";
  card.dataset.idiom = meta.id;
  card.title = meta.description;
  if (rec) {
    card.dataset.rank = String(rec.rank);
    card.dataset.taskFit = String(rec.task_fit);
    card.dataset.dataFit = String(rec.data_fit);
  }
  if (selected) card.classList.add("selected");
  if (rec?.task_fit && rec.data_fit) card.classList.add("best-fit");

  const thumb = document.createElement("div");
  thumb.className = "thumb";
  thumb.textContent = THUMBS[meta.thumbnail] ?? "▦";
  const label = document.createElement("div");
  label.className = "idiom-label";
  label.textContent = meta.label;
  card.append(thumb, label);

  if (rec?.data_fit) {
    const badge = document.createElement("span");
    badge.className = "badge";
    badge.textContent = "👍";
    badge.title = rec.provenance;
    card.appendChild(badge);
  }
  card.addEventListener("click", () => onSelect(meta.id));
  return card;
}

export function renderGallery(root: HTMLElement): void {
  const state = store.get();
  const draft = state.draft;
  if (!draft) {
    store.set({ screen: "goal" });
    return;
  }
  root.innerHTML = `
    <section class="gallery">
      <div class="gallery-block">
        <h2>Specify a task <span class="muted">(optional)</span></h2>
        <div id="task-grid" class="task-grid"></div>
        <p class="hint" id="task-hint"></p>
      </div>
      <div class="gallery-block">
        <h2>Choose a chart</h2>
        <p class="muted">👍 marks charts that fit your data types.</p>
        <div id="idiom-grid" class="idiom-grid"><p class="muted">Loading…</p></div>
      </div>
      <aside id="idiom-detail" class="idiom-detail"></aside>
      <p class="error" id="gallery-error"></p>
    </section>
  `;
  const errorBox = root.querySelector<HTMLElement>("#gallery-error")!;

  // Task gallery
  const taskGrid = root.querySelector<HTMLElement>("#task-grid")!;
  for (const task of state.tasks) {
    const btn = document.createElement("button");
    btn.className = "task-card";
    btn.dataset.task = task.id;
    btn.title = task.description;
    btn.textContent = task.label;
    if (draft.task === task.id) btn.classList.add("selected");
    btn.addEventListener("click", async () => {
      try {
        const current = store.get().draft!;
        const updated =
          current.task === task.id
            ? await api.applyStep(current.id, { type: "clear_task" })
            : await api.applyStep(current.id, { type: "set_task", task: task.id });
        store.set({ draft: updated });
      } catch (err) {
        errorBox.textContent = describeError(err);
      }
    });
    taskGrid.appendChild(btn);
  }
  const hint = root.querySelector<HTMLElement>("#task-hint")!;
  hint.textContent = draft.task
    ? `Selected task: ${draft.task.replace(/_/g, "-")}. Charts serving it rank first.`
    : "Without a task, recommendations come from your data types alone.";

  // Idiom gallery, ordered by the server's ranking.
  const grid = root.querySelector<HTMLElement>("#idiom-grid")!;
  const detail = root.querySelector<HTMLElement>("#idiom-detail")!;
  void refreshRecommendations()
    .then((recs) => {
      const byIdiom = new Map(recs.map((r) => [r.idiom, r]));
      const metas = new Map(store.get().idioms.map((m) => [m.id, m]));
      const ordered = recs
        .map((r) => metas.get(r.idiom))
        .filter((m): m is IdiomMeta => m !== undefined);
      grid.innerHTML = "";
      for (const meta of ordered) {
        grid.appendChild(
          idiomCard(meta, byIdiom.get(meta.id), draft.idiom === meta.id, async (id) => {
            try {
              const updated = await api.applyStep(store.get().draft!.id, {
                type: "set_idiom",
                idiom: id,
              });
              store.set({ draft: updated });
            } catch (err) {
              errorBox.textContent = describeError(err);
            }
          }),
        );
      }
      const selectedId = draft.idiom ?? recs[0]?.idiom;
      const meta = selectedId ? metas.get(selectedId) : undefined;
      const rec = selectedId ? byIdiom.get(selectedId) : undefined;
      if (meta) {
        detail.innerHTML = `
          <h3>${meta.label}</h3>
          <p>${meta.description}</p>
          <p class="requires">${meta.requires}</p>
          <p class="provenance">${rec ? `Recommendation: ${rec.provenance}` : ""}</p>
          <p class="muted">Serves: ${meta.tasks.join(", ").replace(/_/g, "-")}</p>
        `;
      }
    })
    .catch((err) => {
      grid.innerHTML = "";
      errorBox.textContent = describeError(err);
    });
}
