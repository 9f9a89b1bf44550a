// Persistent outbox: measurements queued locally until a sync succeeds.
// Entries carry client-generated ids before the first send, so any number
// of resend attempts converges to exactly one accepted measurement
// (the server deduplicates by id).

import type { ApiClient } from "./api.js";
import type { MeasurementPayload, SyncOutcome } from "./types.js";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface FlushResult {
  sent: number;
  accepted: number;
  duplicate: number;
  rejected: SyncOutcome[];
  remaining: number;
}

export function newMeasurementId(): string {
  const rnd = (globalThis.crypto as Crypto | undefined)?.randomUUID?.();
  if (rnd) return `m-${rnd}`;
  return `m-${Date.now().toString(36)}-${Math.random().toString(36).slice(2, 10)}`;
}

export class Outbox {
  constructor(
    private storage: StorageLike,
    private key = "nutriquest.outbox.v1",
  ) {}

  pending(): MeasurementPayload[] {
    const raw = this.storage.getItem(this.key);
    if (!raw) return [];
    try {
      const parsed = JSON.parse(raw);
      return Array.isArray(parsed) ? (parsed as MeasurementPayload[]) : [];
    } catch {
      return [];
    }
  }

  private save(entries: MeasurementPayload[]): void {
    this.storage.setItem(this.key, JSON.stringify(entries));
  }

  enqueue(measurement: MeasurementPayload): void {
    if (!measurement.id) throw new Error("measurement must carry a client id");
    const entries = this.pending();
    if (entries.some((e) => e.id === measurement.id)) return;
    entries.push(measurement);
    this.save(entries);
  }

  size(): number {
    return this.pending().length;
  }

  /** Send everything queued; keep entries only when the server was
   * unreachable. Accepted, duplicate, and rejected entries all leave the
   * queue (a rejection will not improve by resending the same payload). */
  async flush(api: ApiClient, chwId: string): Promise<FlushResult> {
    const entries = this.pending();
    if (entries.length === 0) {
      return { sent: 0, accepted: 0, duplicate: 0, rejected: [], remaining: 0 };
    }
    let outcomes: SyncOutcome[];
    try {
      const res = await api.sync(`outbox-${Date.now().toString(36)}`, chwId, entries);
      outcomes = res.outcomes;
    } catch {
      // offline or server down: keep the queue intact for the next attempt
      return { sent: 0, accepted: 0, duplicate: 0, rejected: [],
               remaining: entries.length };
    }
    const rejected = outcomes.filter((o) => o.status === "rejected");
    const settled = new Set(outcomes.map((o) => o.id));
    this.save(entries.filter((e) => !settled.has(e.id)));
    return {
      sent: entries.length,
      accepted: outcomes.filter((o) => o.status === "accepted").length,
      duplicate: outcomes.filter((o) => o.status === "duplicate").length,
      rejected,
      remaining: this.size(),
    };
  }
}

/** In-memory stand-in used by tests and private-mode browsers. */
export class MemoryStorage implements StorageLike {
  private data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.has(key) ? this.data.get(key)! : null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
  removeItem(key: string): void {
    this.data.delete(key);
  }
}
