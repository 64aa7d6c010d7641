/**
 * Server-sent event consumer over fetch streaming.
 *
 * Works in browsers and Node 20 alike (no EventSource dependency), resumes
 * with Last-Event-ID after a drop, and reports stream health so the caller
 * can fall back to polling while disconnected.
 */

import type { ApiEvent } from "./types";

export interface EventStreamOptions {
  baseUrl: string;
  token?: string;
  onEvent: (event: ApiEvent) => void;
  onStatus?: (connected: boolean) => void;
  fetchImpl?: typeof fetch;
  retryMs?: number;
}

/** Parse one complete SSE frame block into an ApiEvent (or null for comments). */
export function parseSseFrame(frame: string): ApiEvent | null {
  let data = "";
  for (const line of frame.split("\n")) {
    if (line.startsWith("data:")) data += line.slice(5).trim();
  }
  if (!data) return null;
  try {
    return JSON.parse(data) as ApiEvent;
  } catch {
    return null;
  }
}

/** Split buffered SSE text into complete frames plus the unfinished tail. */
export function splitFrames(buffer: string): { frames: string[]; rest: string } {
  const parts = buffer.split("\n\n");
  const rest = parts.pop() ?? "";
  return { frames: parts, rest };
}

export class EventStream {
  private lastEventId = 0;
  private stopped = false;
  private readonly options: EventStreamOptions;

  constructor(options: EventStreamOptions) {
    this.options = options;
  }

  get lastId(): number {
    return this.lastEventId;
  }

  stop(): void {
    this.stopped = true;
  }

  /** Run the consume loop until stop(); reconnects with backoff. */
  async run(): Promise<void> {
    const fetchImpl = this.options.fetchImpl ?? fetch;
    const retryMs = this.options.retryMs ?? 2000;
    while (!this.stopped) {
      try {
        const headers: Record<string, string> = {
          Accept: "text/event-stream",
          "Last-Event-ID": String(this.lastEventId),
        };
        if (this.options.token) headers["Authorization"] = `Bearer ${this.options.token}`;
        const response = await fetchImpl(`${this.options.baseUrl}/api/v1/events`, { headers });
        if (!response.ok || !response.body) throw new Error(`stream HTTP ${response.status}`);
        this.options.onStatus?.(true);
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        let buffer = "";
        for (;;) {
          if (this.stopped) {
            await reader.cancel();
            return;
          }
          const { done, value } = await reader.read();
          if (done) break;
          buffer += decoder.decode(value, { stream: true });
          const { frames, rest } = splitFrames(buffer);
          buffer = rest;
          for (const frame of frames) {
            const event = parseSseFrame(frame);
            if (event && event.sequence > this.lastEventId) {
              this.lastEventId = event.sequence;
              this.options.onEvent(event);
            }
          }
        }
      } catch {
        // fall through to reconnect
      }
      this.options.onStatus?.(false);
      if (!this.stopped) await new Promise((resolve) => setTimeout(resolve, retryMs));
    }
  }
}
