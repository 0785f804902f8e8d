// Minimal observable app state: current screen, the active draft, cached
// gallery enumerations, and the card being previewed or edited.

import type { DraftDto, IdiomMeta, TaskMeta } from "./types";

export type Screen =
  | "dashboard"
  | "goal"
  | "path"
  | "gallery"
  | "data"
  | "finalize"
  | "preview";

export interface AppState {
  screen: Screen;
  draft: DraftDto | null;
  previewCardId: string | null;
  // When set, finalizing updates this card instead of creating a new one.
  editingCard: { id: string; name: string; version: number; createdAt: string } | null;
  tasks: TaskMeta[];
  idioms: IdiomMeta[];
  notice: string | null;
}

type Listener = () => void;

class Store {
  private state: AppState = {
    screen: "dashboard",
    draft: null,
    previewCardId: null,
    editingCard: null,
    tasks: [],
    idioms: [],
    notice: null,
  };
  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  set(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of [...this.listeners]) {
      fn();
    }
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  reset(): void {
    this.state = {
      screen: "dashboard",
      draft: null,
      previewCardId: null,
      editingCard: null,
      tasks: this.state.tasks,
      idioms: this.state.idioms,
      notice: null,
    };
    for (const fn of [...this.listeners]) {
      fn();
    }
  }
}

export const store = new Store();
