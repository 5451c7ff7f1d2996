import { ApiError, ReviewApi } from './api.js';
import { isDone } from './types.js';
import type { Label, ReviewItem, Stats } from './types.js';

export type SessionPhase = 'loading' | 'reviewing' | 'done' | 'error';

export interface SessionError {
  action: 'next' | 'submit';
  message: string;
  /** submit retries need the decision that failed */
  pending?: { id: number; label: Label };
}

/**
 * Drives one reviewer's pass over the queue.
 *
 * Invariants: at most one request in flight; a decision is sent exactly once
 * (repeat clicks while submitting are dropped); the queue only advances on an
 * acknowledged POST. Skipped items defer to the end of the queue without
 * touching the journal.
 */
export class ReviewSession {
  phase: SessionPhase = 'loading';
  current: ReviewItem | null = null;
  stats: Stats | null = null;
  error: SessionError | null = null;
  decidedHere = 0;

  private skipped: number[] = [];
  private inFlight = false;

  constructor(private readonly api: ReviewApi) {}

  async start(): Promise<void> {
    await this.refreshStats();
    await this.loadNext();
  }

  async loadNext(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    this.phase = 'loading';
    try {
      let reply = await this.api.next(this.skipped);
      if (isDone(reply) && reply.queued > 0 && this.skipped.length > 0) {
        // only skipped items remain: bring them back, earliest first
        this.skipped = [];
        reply = await this.api.next([]);
      }
      if (isDone(reply)) {
        this.current = null;
        this.phase = 'done';
      } else {
        this.current = reply;
        this.phase = 'reviewing';
      }
      this.error = null;
    } catch (err) {
      this.phase = 'error';
      this.error = { action: 'next', message: (err as ApiError).message };
    } finally {
      this.inFlight = false;
    }
  }

  /**
   * Submit exactly once: returns false when the click is dropped (no current
   * item, or another request still in flight).
   */
  async decide(label: Label): Promise<boolean> {
    if (this.inFlight || this.current === null) return false;
    const item = this.current;
    this.inFlight = true;
    this.phase = 'loading';
    try {
      await this.api.submit(item.id, label);
      this.decidedHere += 1;
      this.current = null;
      this.error = null;
    } catch (err) {
      this.phase = 'error';
      this.error = {
        action: 'submit',
        message: (err as ApiError).message,
        pending: { id: item.id, label },
      };
      return false;
    } finally {
      this.inFlight = false;
    }
    await this.refreshStats();
    await this.loadNext();
    return true;
  }

  /** Defer the current item to the end of the queue; nothing is journaled. */
  async skip(): Promise<void> {
    if (this.inFlight || this.current === null) return;
    this.skipped.push(this.current.id);
    this.current = null;
    await this.loadNext();
  }

  /** Re-run whatever failed; a failed submit is resent with the same label. */
  async retry(): Promise<void> {
    const failed = this.error;
    if (failed === null) return;
    this.error = null;
    if (failed.action === 'submit' && failed.pending && this.current !== null) {
      await this.decide(failed.pending.label);
    } else {
      await this.loadNext();
      await this.refreshStats();
    }
  }

  async refreshStats(): Promise<void> {
    try {
      this.stats = await this.api.stats();
    } catch {
      // stats are advisory; never block reviewing on them
    }
  }
}
