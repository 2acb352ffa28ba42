// Live event feed over the service's NDJSON stream.
//
// One connection at a time; on any drop it reconnects with
// ?since_seq=<last seen>, so the view never duplicates or skips an event.

import type { AccessEventRecord } from "./types.js";

export class NdjsonSplitter {
  private carry = "";

  /** Feed a chunk; returns the complete non-blank lines it finished. */
  push(chunk: string): string[] {
    const pieces = (this.carry + chunk).split("\n");
    this.carry = pieces.pop() ?? "";
    return pieces.filter((line) => line.trim().length > 0);
  }
}

export interface FeedOptions {
  fetchImpl?: typeof fetch;
  /** Reconnect delay; attempt counts consecutive failures. */
  retryDelayMs?: (attempt: number) => number;
  /** Passed to the stream endpoint; 0 = endless (the normal mode). */
  limit?: number;
  onError?: (err: unknown) => void;
}

const defaultDelay = (attempt: number) => Math.min(500 * 2 ** attempt, 5000);

export class LiveFeed {
  lastSeq = 0;
  private stopped = false;

  constructor(
    private baseUrl: string,
    private onEvent: (event: AccessEventRecord) => void,
    private options: FeedOptions = {}
  ) {}

  stop(): void {
    this.stopped = true;
  }

  /** Run until stop(); resolves when stopped or (with limit set) the stream ends. */
  async run(): Promise<void> {
    const delay = this.options.retryDelayMs ?? defaultDelay;
    let attempt = 0;
    while (!this.stopped) {
      try {
        await this.consumeOnce();
        attempt = 0;
        if (this.options.limit) {
          return; // bounded stream finished
        }
      } catch (err) {
        attempt += 1;
        this.options.onError?.(err);
      }
      if (this.stopped) {
        return;
      }
      await new Promise((resolve) => setTimeout(resolve, delay(attempt)));
    }
  }

  private async consumeOnce(): Promise<void> {
    const fetchImpl = this.options.fetchImpl ?? globalThis.fetch.bind(globalThis);
    const params = new URLSearchParams({ since_seq: String(this.lastSeq) });
    if (this.options.limit) {
      params.set("limit", String(this.options.limit));
    }
    const response = await fetchImpl(`${this.baseUrl}/events/stream?${params}`);
    if (!response.ok || !response.body) {
      throw new Error(`event stream failed: HTTP ${response.status}`);
    }
    const reader = response.body.getReader();
    const splitter = new NdjsonSplitter();
    const decoder = new TextDecoder();
    try {
      while (!this.stopped) {
        const { done, value } = await reader.read();
        if (done) {
          return;
        }
        for (const line of splitter.push(decoder.decode(value, { stream: true }))) {
          const event = JSON.parse(line) as AccessEventRecord;
          if (event.seq <= this.lastSeq) {
            continue; // overlap from a reconnect race; never show twice
          }
          this.lastSeq = event.seq;
          this.onEvent(event);
        }
      }
    } finally {
      await reader.cancel().catch(() => undefined);
    }
  }
}
