// End-to-end smoke against the real Python game service: create a game,
// play two human moves, check the engine replies and run highlighting
// match the service's own statistics, and step a recorded transcript
// through the replay endpoint.

import { spawn, ChildProcess, execSync } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, Transcript } from "../src/api.js";
import { renderBoard } from "../src/board.js";
import { parseTranscript, Replayer } from "../src/replay.js";

const PORT = 8911;
const BASE = `http://127.0.0.1:${PORT}`;
let service: ChildProcess;
const api = new ApiClient(BASE);

async function waitForService(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${BASE}/solve?game=a&m=1&k=1`);
      if (resp.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("game service did not come up");
}

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-c",
     "import uvicorn, eso.service as s; " +
     `uvicorn.run(s.create_app(), host='127.0.0.1', port=${PORT}, log_level='warning')`],
    { cwd: "..", stdio: "ignore" },
  );
  await waitForService();
}, 30000);

afterAll(() => {
  service?.kill();
});

describe("human vs engine over the live service", () => {
  it("plays two moves with engine replies and consistent highlighting", async () => {
    let view = await api.newGame({
      kind: "a", m: 4, k: 3, human: "A", engine: "b:nonextend",
    });
    expect(view.status).toBe("playing");
    expect(view.turn).toBe(0);

    view = await api.move(view.id, { column: 0 });
    expect(view.turn).toBe(1);
    expect(view.engine_reply).toHaveProperty("row");
    expect(view.points).toHaveLength(1);

    view = await api.move(view.id, { column: 1 });
    expect(view.turn).toBe(2);
    expect(view.points).toHaveLength(2);

    // The rendered board shows exactly the service's run highlighting.
    const svg = renderBoard(view);
    expect(svg.match(/<circle/g)).toHaveLength(2);
    for (const i of view.up_run) {
      expect(svg).toContain(`data-index="${i}" `);
    }
    expect(view.up_run).toHaveLength(view.lis);
    expect(view.down_run).toHaveLength(view.lds);
    // Only legal gaps are clickable.
    expect(svg.match(/column-gap/g)).toHaveLength(view.legal.columns!.length);
  });

  it("shows optimal hints and finishes a (3,3) game in four turns", async () => {
    let view = await api.newGame({
      kind: "a", m: 3, k: 3, human: "A", engine: "b:optimal",
    });
    let guard = 0;
    while (view.status === "playing" && guard++ < 6) {
      const hint = await api.hint(view.id);
      expect(hint.source).toBe("optimal");
      view = await api.move(view.id, hint.move as Record<string, number>);
    }
    expect(view.status).toBe("finished");
    expect(view.turn).toBe(4);
  });

  it("rejects out-of-turn and illegal moves", async () => {
    const view = await api.newGame({
      kind: "a", m: 3, k: 3, human: "A", engine: "b:optimal",
    });
    await expect(api.move(view.id, { row: 0 })).rejects.toThrow(/409/);
    await expect(api.move(view.id, { column: 42 })).rejects.toThrow(/422/);
  });

  it("steps a recorded match through the replay viewer", async () => {
    const raw = execSync(
      "python3 -m eso.cli match --a a:optimal --b b:optimal --m 3 --k 3",
      { cwd: "..", encoding: "utf-8" },
    );
    const transcript: Transcript = parseTranscript(raw);
    expect(transcript.result.turns).toBe(4);

    const replayer = new Replayer(api, transcript);
    const seen: number[] = [];
    let step = await replayer.current();
    seen.push(step.points.length);
    while (replayer.step < replayer.total) {
      step = await replayer.next();
      seen.push(step.points.length);
    }
    expect(seen).toEqual([0, 1, 2, 3, 4]);
    expect(step.status).toBe("finished");
    expect(step.cause).toBe(transcript.result.cause);
    // Stepping back rewinds.
    step = await replayer.prev();
    expect(step.points).toHaveLength(3);
    expect(step.status).toBe("playing");
  });
});
