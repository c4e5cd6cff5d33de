// Pure board rendering: a state view in, an SVG string out. Ranks map to
// evenly spaced coordinates (only the order type carries information, so
// even spacing maximises legibility). Clickable regions carry data-
// attributes; the app wires the listeners.

export interface BoardState {
  points: number[];
  up_run: number[];
  down_run: number[];
  legal: { columns?: number[]; rows?: number[]; tiers?: number[] };
  pending_column?: number | null;
  kind?: "a" | "b";
  k?: number;
}

export const SIZE = 400;
const MARGIN = 24;

function xAt(i: number, t: number): number {
  return MARGIN + ((i + 1) * (SIZE - 2 * MARGIN)) / (t + 1);
}

function yAt(rank: number, levels: number): number {
  return SIZE - MARGIN - (rank * (SIZE - 2 * MARGIN)) / (levels + 1);
}

function gapX(column: number, t: number): number {
  return MARGIN + ((column + 0.5) * (SIZE - 2 * MARGIN)) / (t + 1);
}

function gapY(row: number, t: number): number {
  return SIZE - MARGIN - ((row + 0.5) * (SIZE - 2 * MARGIN)) / (t + 1);
}

function polyline(indices: number[], points: number[], levels: number, cls: string): string {
  if (indices.length < 2) return "";
  const coords = indices
    .map((i) => `${xAt(i, points.length - 1).toFixed(1)},${yAt(points[i], levels).toFixed(1)}`)
    .join(" ");
  return `<polyline class="${cls}" fill="none" points="${coords}"/>`;
}

export function renderBoard(state: BoardState): string {
  const points = state.points;
  const t = points.length;
  const tiered = state.kind === "b";
  const levels = tiered ? (state.k ?? 2) - 1 : t;
  const parts: string[] = [
    `<svg class="board" viewBox="0 0 ${SIZE} ${SIZE}" xmlns="http://www.w3.org/2000/svg">`,
    `<rect class="frame" x="${MARGIN}" y="${MARGIN}" width="${SIZE - 2 * MARGIN}" height="${SIZE - 2 * MARGIN}" fill="none"/>`,
  ];

  parts.push(polyline(state.up_run, points, levels, "up-run"));
  parts.push(polyline(state.down_run, points, levels, "down-run"));

  for (const column of state.legal.columns ?? []) {
    parts.push(
      `<rect class="gap column-gap" data-column="${column}" x="${(gapX(column, t) - 8).toFixed(1)}" y="${MARGIN}" width="16" height="${SIZE - 2 * MARGIN}"/>`,
    );
  }
  if (state.pending_column !== null && state.pending_column !== undefined) {
    parts.push(
      `<line class="pending" x1="${gapX(state.pending_column, t).toFixed(1)}" y1="${MARGIN}" x2="${gapX(state.pending_column, t).toFixed(1)}" y2="${SIZE - MARGIN}"/>`,
    );
    for (const row of state.legal.rows ?? []) {
      parts.push(
        `<rect class="gap row-gap" data-row="${row}" x="${MARGIN}" y="${(gapY(row, t) - 8).toFixed(1)}" width="${SIZE - 2 * MARGIN}" height="16"/>`,
      );
    }
  }

  points.forEach((rank, i) => {
    const inUp = state.up_run.includes(i);
    const inDown = state.down_run.includes(i);
    const cls = ["point", inUp ? "in-up" : "", inDown ? "in-down" : ""]
      .filter(Boolean)
      .join(" ");
    parts.push(
      `<circle class="${cls}" data-index="${i}" cx="${xAt(i, t - 1).toFixed(1)}" cy="${yAt(rank, levels).toFixed(1)}" r="7"/>`,
    );
    parts.push(
      `<text class="tag" x="${xAt(i, t - 1).toFixed(1)}" y="${(yAt(rank, levels) - 11).toFixed(1)}">${i + 1}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.filter(Boolean).join("\n");
}

export function renderTierButtons(tiers: number[]): string {
  return tiers
    .map((tier) => `<button class="tier" data-tier="${tier}">tier ${tier}</button>`)
    .join("");
}

export function renderStatus(view: {
  status: string;
  cause: string | null;
  turn: number;
  lis: number;
  lds: number;
}): string {
  const head =
    view.status === "finished"
      ? `game over after ${view.turn} turns (${view.cause})`
      : `turn ${view.turn + 1}`;
  return `${head} — longest up-run ${view.lis}, longest down-run ${view.lds}`;
}
