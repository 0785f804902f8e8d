// Test harness: spawns the real Python backend, points the UI at it, and
// offers DOM polling utilities for the jsdom session.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import net from "node:net";
import os from "node:os";
import path from "node:path";

export interface Backend {
  base: string;
  stop: () => void;
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = net.createServer();
    srv.listen(0, "127.0.0.1", () => {
      const address = srv.address();
      if (address && typeof address === "object") {
        const port = address.port;
        srv.close(() => resolve(port));
      } else {
        srv.close(() => reject(new Error("no port")));
      }
    });
  });
}

export async function startBackend(): Promise<Backend> {
  const port = await freePort();
  const dataDir = mkdtempSync(path.join(os.tmpdir(), "indicards-ui-"));
  const proc: ChildProcess = spawn(
    "python3",
    ["-m", "indicards", "--port", String(port), "--data-dir", dataDir],
    { stdio: "ignore" },
  );
  const base = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${base}/api/health`);
      if (resp.ok) {
        (globalThis as { __API_BASE__?: string }).__API_BASE__ = base;
        return {
          base,
          stop: () => {
            proc.kill("SIGKILL");
          },
        };
      }
    } catch {
      // not up yet
    }
    if (proc.exitCode !== null) {
      throw new Error(`backend exited with code ${proc.exitCode}`);
    }
    await sleep(100);
  }
  proc.kill("SIGKILL");
  throw new Error("backend did not become ready in 30s");
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function until<T>(
  probe: () => T | null | undefined | false,
  what = "condition",
  timeoutMs = 20_000,
): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) return value;
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await sleep(50);
  }
}

export function click(el: Element): void {
  (el as HTMLElement).click();
}

export function setValue(el: HTMLInputElement | HTMLTextAreaElement, value: string): void {
  el.value = value;
  el.dispatchEvent(new Event("input", { bubbles: true }));
  el.dispatchEvent(new Event("change", { bubbles: true }));
}

export function attachFile(input: HTMLInputElement, name: string, content: string): void {
  const file = new File([content], name, { type: "text/csv" });
  Object.defineProperty(input, "files", { value: [file], configurable: true });
  input.dispatchEvent(new Event("change", { bubbles: true }));
}
