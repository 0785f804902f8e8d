// The gallery must display exactly what the recommendations endpoint
// returned: same idioms, same ranks, same fit flags, badges iff data_fit,
// in rank order. Checked against ten randomized drafts.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { api } from "../src/api";
import { boot } from "../src/main";
import { store } from "../src/store";
import type { DType, GoalQuestion, RecommendationsResponse } from "../src/types";
import { startBackend, until, type Backend } from "./helpers";

let backend: Backend;
let root: HTMLElement;

const DTYPES: DType[] = ["categorical", "numerical", "categorical_ordered"];
const TASKS = [
  "distribution",
  "trend",
  "correlation",
  "comparison",
  "part_to_whole",
  "ranking",
  "deviation",
];

// Deterministic pseudo-random sequence so failures are reproducible.
function mulberry(seed: number): () => number {
  let a = seed;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function pick<T>(rnd: () => number, items: T[]): T {
  return items[Math.floor(rnd() * items.length)];
}

function randomGoalQuestion(rnd: () => number, i: number): GoalQuestion {
  const count = 2 + Math.floor(rnd() * 3);
  return {
    goal: `probe goal ${i}`,
    question: `probe question ${i}`,
    idea: "",
    requirements: Array.from({ length: count }, (_, k) => ({
      name: `field_${i}_${k}`,
      dtype: pick(rnd, DTYPES),
    })),
  };
}

function randomCsv(rnd: () => number, i: number): string {
  const cols = 1 + Math.floor(rnd() * 4);
  const rows = 1 + Math.floor(rnd() * 5);
  const numeric = Array.from({ length: cols }, () => rnd() < 0.5);
  const header = Array.from({ length: cols }, (_, c) => `col_${i}_${c}`).join(",");
  const body = Array.from({ length: rows }, (_, rix) =>
    numeric
      .map((isNum, c) => (isNum ? String(Math.floor(rnd() * 100)) : `v${rix}_${c}`))
      .join(","),
  ).join("\n");
  return `${header}\n${body}`;
}

describe("gallery shows raw recommendation data", () => {
  beforeAll(async () => {
    backend = await startBackend();
    root = document.createElement("div");
    document.body.appendChild(root);
    boot(root);
    await until(() => store.get().idioms.length === 11, "meta caches");
  });

  afterAll(() => {
    backend.stop();
  });

  it("matches the API response for 10 randomized drafts", async () => {
    const rnd = mulberry(20240101);
    for (let i = 0; i < 10; i++) {
      let draft = await api.createDraft(randomGoalQuestion(rnd, i));
      if (rnd() < 0.5) {
        draft = await api.applyStep(draft.id, {
          type: "set_task",
          task: pick(rnd, TASKS),
        });
      }
      if (rnd() < 0.5) {
        draft = await api.uploadCsv(draft.id, `probe_${i}.csv`, randomCsv(rnd, i));
      }

      const raw: RecommendationsResponse = await api.recommendations(draft.id);
      expect(raw.recommendations).toHaveLength(11);

      store.set({ screen: "gallery", draft, notice: null });
      await until(
        () => root.querySelectorAll("#idiom-grid .idiom-card[data-rank]").length === 11,
        `gallery rendered for draft ${i}`,
      );

      const displayed = [...root.querySelectorAll<HTMLElement>("#idiom-grid .idiom-card")].map(
        (card) => ({
          idiom: card.dataset.idiom,
          rank: Number(card.dataset.rank),
          task_fit: card.dataset.taskFit === "true",
          data_fit: card.dataset.dataFit === "true",
          badged: card.querySelector(".badge") !== null,
        }),
      );

      expect(displayed.map((d) => ({
        idiom: d.idiom,
        rank: d.rank,
        task_fit: d.task_fit,
        data_fit: d.data_fit,
      }))).toEqual(
        raw.recommendations.map((r) => ({
          idiom: r.idiom,
          rank: r.rank,
          task_fit: r.task_fit,
          data_fit: r.data_fit,
        })),
      );
      // Displayed order is the server's rank order, badges mark data fit.
      expect(displayed.map((d) => d.rank)).toEqual(
        raw.recommendations.map((r) => r.rank),
      );
      for (const entry of displayed) {
        expect(entry.badged).toBe(entry.data_fit);
      }
    }
  });
});
