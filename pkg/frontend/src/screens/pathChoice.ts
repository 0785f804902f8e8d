// Entry-point chooser: start from the visualization side (task or chart
// first) or from the dataset side. Advisory only; every screen stays
// reachable afterwards.

import { api, describeError } from "../api";
import { store } from "../store";

export function renderPathChoice(root: HTMLElement): void {
  root.innerHTML = `
    <section class="path-choice">
      <h2>How would you like to start?</h2>
      <div class="path-cards">
        <button class="path-card" id="path-visualization">
          <h3>Select Visualization</h3>
          <p>Pick an analysis task or a chart first, then fill it with data.</p>
        </button>
        <button class="path-card" id="path-dataset">
          <h3>Select Dataset</h3>
          <p>Start from your data; suitable charts are recommended from its column types.</p>
        </button>
      </div>
      <p class="error" id="path-error"></p>
    </section>
  `;
  const draft = store.get().draft;
  if (!draft) {
    store.set({ screen: "goal" });
    return;
  }
  const errorBox = root.querySelector<HTMLElement>("#path-error")!;
  const choose = async (path: "visualization" | "dataset", screen: "gallery" | "data") => {
    try {
      const updated = await api.setPath(draft.id, path);
      store.set({ draft: updated, screen });
    } catch (err) {
      errorBox.textContent = describeError(err);
    }
  };
  root
    .querySelector("#path-visualization")!
    .addEventListener("click", () => void choose("visualization", "gallery"));
  root
    .querySelector("#path-dataset")!
    .addEventListener("click", () => void choose("dataset", "data"));
}
