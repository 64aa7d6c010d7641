/**
 * Ordering guards: concurrent API responses are reconciled by snapshot
 * version and event sequence so a slow stale response can never overwrite
 * fresher state.
 */

export class VersionGate {
  private seen = -1;

  /** True when `version` is new; records it. Stale versions return false. */
  accept(version: number): boolean {
    if (version <= this.seen) return false;
    this.seen = version;
    return true;
  }

  get current(): number {
    return this.seen;
  }
}

export class SequenceTracker {
  private last = 0;

  /** Returns events not yet seen, in order; updates the cursor. */
  take<T extends { sequence: number }>(events: T[]): T[] {
    const fresh = events
      .filter((e) => e.sequence > this.last)
      .sort((a, b) => a.sequence - b.sequence);
    if (fresh.length > 0) this.last = fresh[fresh.length - 1]!.sequence;
    return fresh;
  }

  get lastSequence(): number {
    return this.last;
  }
}
