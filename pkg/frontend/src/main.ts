// App shell: header, accordion step sidebar (jump between task/chart, data,
// and finalize in any order once a draft exists), and screen routing.

import { api } from "./api";
import { store, type Screen } from "./store";
import { renderDashboard } from "./screens/dashboard";
import { renderGoalQuestion } from "./screens/goalQuestion";
import { renderPathChoice } from "./screens/pathChoice";
import { renderGallery } from "./screens/gallery";
import { renderDataEditor } from "./screens/dataEditor";
import { renderFinalize } from "./screens/finalize";
import { renderPreview } from "./screens/preview";
import "./styles.css";

const SCREENS: Record<Screen, (root: HTMLElement) => void> = {
  dashboard: renderDashboard,
  goal: renderGoalQuestion,
  path: renderPathChoice,
  gallery: renderGallery,
  data: renderDataEditor,
  finalize: renderFinalize,
  preview: renderPreview,
};

const AUTHORING_STEPS: { screen: Screen; label: string }[] = [
  { screen: "goal", label: "1 · Goal & question" },
  { screen: "gallery", label: "2 · Task & chart" },
  { screen: "data", label: "3 · Data" },
  { screen: "finalize", label: "4 · Finalize" },
];

function renderShell(root: HTMLElement): void {
  const state = store.get();
  root.innerHTML = `
    <header class="topbar">
      <h1 id="app-title">Indicator Cards</h1>
      <span class="notice" id="notice"></span>
    </header>
    <div class="layout">
      <nav class="sidebar" id="sidebar"></nav>
      <main id="screen"></main>
    </div>
  `;
  const notice = root.querySelector<HTMLElement>("#notice")!;
  if (state.notice) notice.textContent = state.notice;
  root.querySelector("#app-title")!.addEventListener("click", () => store.reset());

  const sidebar = root.querySelector<HTMLElement>("#sidebar")!;
  const authoring = state.draft !== null && state.screen !== "dashboard";
  if (authoring) {
    for (const step of AUTHORING_STEPS) {
      const btn = document.createElement("button");
      btn.className = "step-link";
      btn.dataset.screen = step.screen;
      btn.textContent = step.label;
      if (state.screen === step.screen) btn.classList.add("active");
      btn.addEventListener("click", () => store.set({ screen: step.screen }));
      sidebar.appendChild(btn);
    }
    const home = document.createElement("button");
    home.className = "step-link muted";
    home.textContent = "← Dashboard";
    home.addEventListener("click", () => store.reset());
    sidebar.appendChild(home);
  } else {
    sidebar.hidden = true;
  }

  SCREENS[state.screen](root.querySelector<HTMLElement>("#screen")!);
}

export function boot(root: HTMLElement): void {
  store.subscribe(() => renderShell(root));
  renderShell(root);
  // Gallery enumerations are fetched once and cached for hover descriptions.
  void Promise.all([api.metaTasks(), api.metaIdioms()])
    .then(([tasks, idioms]) => store.set({ tasks, idioms }))
    .catch(() => {
      store.set({ notice: "Backend unreachable; is the service running?" });
    });
}

const mount = document.getElementById("app");
if (mount) {
  boot(mount);
}
