import { describe, expect, it } from "vitest";

import { decimate, formatByteRate, formatClock, formatLatency } from "../src/format";
import { parseSseFrame, splitFrames } from "../src/events";
import { SequenceTracker, VersionGate } from "../src/reconcile";

describe("formatters", () => {
  it("scales byte rates", () => {
    expect(formatByteRate(950)).toBe("950 B/s");
    expect(formatByteRate(2_000_000)).toBe("2.0 MB/s");
    expect(formatByteRate(123_456)).toBe("123 kB/s");
  });

  it("formats latency including the no-data case", () => {
    expect(formatLatency(9.4)).toBe("9.40 ms");
    expect(formatLatency(null)).toBe("–");
  });

  it("extracts the clock from ISO timestamps", () => {
    expect(formatClock("2025-03-06T14:59:00.000Z")).toBe("14:59:00");
  });
});

describe("decimate", () => {
  it("is lossless up to the limit", () => {
    const points = Array.from({ length: 1000 }, (_, i) => i);
    expect(decimate(points, 1000)).toBe(points);
  });

  it("keeps the last point when striding", () => {
    const points = Array.from({ length: 2500 }, (_, i) => i);
    const out = decimate(points, 1000);
    expect(out.length).toBeLessThanOrEqual(1001);
    expect(out.at(-1)).toBe(2499);
    expect(out[0]).toBe(0);
  });
});

describe("SSE parsing", () => {
  it("splits buffered frames and keeps the tail", () => {
    const { frames, rest } = splitFrames("id: 1\ndata: {}\n\nid: 2\ndata: {\"a\"");
    expect(frames).toHaveLength(1);
    expect(rest).toContain("id: 2");
  });

  it("parses event frames and ignores heartbeats", () => {
    const frame = 'id: 5\nevent: SNAPSHOT_UPDATED\ndata: {"sequence":5,"event_type":"SNAPSHOT_UPDATED","payload":{"version":5}}';
    const event = parseSseFrame(frame);
    expect(event?.sequence).toBe(5);
    expect(event?.event_type).toBe("SNAPSHOT_UPDATED");
    expect(parseSseFrame(": heartbeat")).toBeNull();
  });
});

describe("reconciliation", () => {
  it("discards stale snapshot versions", () => {
    const gate = new VersionGate();
    expect(gate.accept(3)).toBe(true);
    expect(gate.accept(2)).toBe(false); // slow response arriving late
    expect(gate.accept(4)).toBe(true);
  });

  it("delivers events once, in sequence order", () => {
    const tracker = new SequenceTracker();
    const batch = [{ sequence: 2 }, { sequence: 1 }, { sequence: 3 }];
    expect(tracker.take(batch).map((e) => e.sequence)).toEqual([1, 2, 3]);
    expect(tracker.take(batch)).toEqual([]);
    expect(tracker.take([{ sequence: 4 }]).map((e) => e.sequence)).toEqual([4]);
  });
});
