// Replay viewer state: steps through a recorded transcript, asking the
// service for each intermediate view so the client never recomputes runs.

import { ApiClient, ReplayView, Transcript } from "./api.js";

export class Replayer {
  step = 0;

  constructor(
    private api: ApiClient,
    readonly transcript: Transcript,
  ) {}

  get total(): number {
    return this.transcript.moves.length;
  }

  current(): Promise<ReplayView> {
    return this.api.replayStep(this.transcript, this.step);
  }

  next(): Promise<ReplayView> {
    if (this.step < this.total) this.step += 1;
    return this.current();
  }

  prev(): Promise<ReplayView> {
    if (this.step > 0) this.step -= 1;
    return this.current();
  }
}

export function parseTranscript(text: string): Transcript {
  const data = JSON.parse(text) as Transcript;
  if (data.v !== 1 || !Array.isArray(data.moves)) {
    throw new Error("not a recognisable transcript file");
  }
  return data;
}
