// DOM wiring: new-game form, click-to-move, hint overlay, replay viewer.
// All state shown comes from service responses (thin-client rule).

import { ApiClient, GameView, Hint } from "./api.js";
import { renderBoard, renderStatus, renderTierButtons } from "./board.js";
import { parseTranscript, Replayer } from "./replay.js";

const api = new ApiClient(
  (window as unknown as { ESO_BASE?: string }).ESO_BASE ?? "http://127.0.0.1:8000",
);

let view: GameView | null = null;
let hintShown = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element ${id}`);
  return node as T;
}

function showError(err: unknown): void {
  el("error").textContent = err instanceof Error ? err.message : String(err);
}

async function refresh(next: GameView): Promise<void> {
  view = next;
  el("board-holder").innerHTML = renderBoard(next);
  el("status").textContent = renderStatus(next);
  el("tiers").innerHTML =
    next.kind === "b" && next.human === "B" && next.status === "playing"
      ? renderTierButtons(next.legal.tiers ?? [])
      : "";
  el("error").textContent = "";
  wireGaps();
  if (hintShown && next.status === "playing") {
    await showHint();
  } else {
    el("hint").textContent = "";
  }
}

function wireGaps(): void {
  document.querySelectorAll<SVGRectElement>(".column-gap").forEach((gap) => {
    gap.addEventListener("click", () => {
      if (!view || view.status !== "playing" || view.human !== "A") return;
      void play({ column: Number(gap.dataset.column) });
    });
  });
  document.querySelectorAll<SVGRectElement>(".row-gap").forEach((gap) => {
    gap.addEventListener("click", () => {
      if (!view || view.status !== "playing" || view.human !== "B") return;
      void play({ row: Number(gap.dataset.row) });
    });
  });
  document.querySelectorAll<HTMLButtonElement>("button.tier").forEach((btn) => {
    btn.addEventListener("click", () => {
      if (!view || view.status !== "playing") return;
      void play({ tier: Number(btn.dataset.tier) });
    });
  });
}

async function play(move: Record<string, number>): Promise<void> {
  if (!view) return;
  try {
    await refresh(await api.move(view.id, move));
  } catch (err) {
    showError(err);
  }
}

async function showHint(): Promise<void> {
  if (!view) return;
  try {
    const hint: Hint = await api.hint(view.id);
    const move = Object.entries(hint.move)
      .map(([key, value]) => `${key} ${value}`)
      .join(", ");
    const value = hint.value !== undefined ? `, game ends in ${hint.value}` : "";
    el("hint").textContent = `hint (${hint.source}): ${move}${value}`;
  } catch (err) {
    showError(err);
  }
}

export function start(): void {
  el<HTMLFormElement>("new-game").addEventListener("submit", (event) => {
    event.preventDefault();
    const form = new FormData(event.target as HTMLFormElement);
    void api
      .newGame({
        kind: String(form.get("kind")),
        m: Number(form.get("m")),
        k: Number(form.get("k")),
        human: String(form.get("human")),
        engine: String(form.get("engine")),
      })
      .then(refresh)
      .catch(showError);
  });

  el<HTMLInputElement>("hint-toggle").addEventListener("change", (event) => {
    hintShown = (event.target as HTMLInputElement).checked;
    if (hintShown) void showHint();
    else el("hint").textContent = "";
  });

  el<HTMLInputElement>("replay-file").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      const replayer = new Replayer(api, parseTranscript(await file.text()));
      const paint = async () => {
        const step = await replayer.current();
        el("board-holder").innerHTML = renderBoard({ ...step, legal: {} });
        el("status").textContent =
          `replay ${step.step}/${step.total} — ` + renderStatus({ ...step, turn: step.step });
      };
      el("replay-next").onclick = () => void replayer.next().then(paint);
      el("replay-prev").onclick = () => void replayer.prev().then(paint);
      await paint();
    } catch (err) {
      showError(err);
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("new-game")) {
  start();
}
