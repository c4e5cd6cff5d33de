// Typed client for the game service. The UI computes no game logic: every
// run, value and legality shown comes from these responses.

export interface GameView {
  id: string;
  kind: "a" | "b";
  m: number;
  k: number;
  human: "A" | "B";
  engine: string;
  points: number[];
  turn: number;
  status: "playing" | "finished";
  cause: string | null;
  lis: number;
  lds: number;
  up_run: number[];
  down_run: number[];
  pending_column: number | null;
  legal: { columns?: number[]; rows?: number[]; tiers?: number[] };
  to_move: "A" | "B" | null;
  engine_reply?: Record<string, number | null>;
}

export interface Hint {
  move: { column?: number; row?: number; tier?: number };
  source: "optimal" | "strategy";
  value?: number;
}

export interface ReplayView {
  kind: "a" | "b";
  m: number;
  k: number;
  step: number;
  total: number;
  points: number[];
  lis: number;
  lds: number;
  up_run: number[];
  down_run: number[];
  status: "playing" | "finished";
  cause: string | null;
}

export interface Transcript {
  v: number;
  kind: "a" | "b";
  m: number;
  k: number;
  moves: [number, number][];
  strategies: Record<string, string>;
  seed: number | null;
  result: { turns: number; cause: string };
}

export class ApiClient {
  constructor(private base: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!resp.ok) {
      const body = await resp.text();
      throw new Error(`${resp.status} ${path}: ${body}`);
    }
    return (await resp.json()) as T;
  }

  newGame(body: {
    kind: string;
    m: number;
    k: number;
    human: string;
    engine: string;
  }): Promise<GameView> {
    return this.request("/games", { method: "POST", body: JSON.stringify(body) });
  }

  getGame(id: string): Promise<GameView> {
    return this.request(`/games/${id}`);
  }

  move(id: string, move: Record<string, number>): Promise<GameView> {
    return this.request(`/games/${id}/moves`, {
      method: "POST",
      body: JSON.stringify(move),
    });
  }

  hint(id: string): Promise<Hint> {
    return this.request(`/games/${id}/hint`);
  }

  replayStep(transcript: Transcript, step: number): Promise<ReplayView> {
    return this.request("/replay", {
      method: "POST",
      body: JSON.stringify({ transcript, step }),
    });
  }

  solve(game: string, m: number, k: number): Promise<{ lo: number; hi: number; complete: boolean }> {
    return this.request(`/solve?game=${game}&m=${m}&k=${k}`);
  }
}
