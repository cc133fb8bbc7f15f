/** Debounced request loop with supersession.
 *
 * Slider drags fire schedule() on every tick; only the settled value goes
 * to the network (~150 ms quiet time), at most one request is in flight,
 * and a response is applied only when no newer request exists: the chart
 * always reflects the most recently issued controls. Timers are
 * injectable so tests can drive the loop deterministically.
 */

import { TuneRequestBody, TuneResponse } from "./api.js";

export type Fetcher = (body: TuneRequestBody) => Promise<TuneResponse>;

export interface TunerEvents {
  onResult: (response: TuneResponse) => void;
  onError: (message: string) => void;
  onBusy?: (busy: boolean) => void;
}

export interface TimerHost {
  setTimeout: (fn: () => void, ms: number) => unknown;
  clearTimeout: (handle: unknown) => void;
}

export const DEBOUNCE_MS = 150;

export class TunerLoop {
  private latest = 0; // token of the newest scheduled body
  private applied = 0; // token of the newest applied response
  private inflight: number | null = null;
  private pendingBody: TuneRequestBody | null = null;
  private pendingToken = 0;
  private timer: unknown = null;

  constructor(
    private readonly fetcher: Fetcher,
    private readonly events: TunerEvents,
    private readonly delayMs: number = DEBOUNCE_MS,
    private readonly timers: TimerHost = {
      setTimeout: (fn, ms) => setTimeout(fn, ms),
      clearTimeout: (h) => clearTimeout(h as ReturnType<typeof setTimeout>),
    },
  ) {}

  /** Replace any pending request with this body and restart the quiet-time
   * clock. Returns the request token (tests use it; the UI ignores it). */
  schedule(body: TuneRequestBody): number {
    this.latest += 1;
    this.pendingBody = body;
    this.pendingToken = this.latest;
    if (this.timer !== null) {
      this.timers.clearTimeout(this.timer);
    }
    this.timer = this.timers.setTimeout(() => {
      this.timer = null;
      this.fire();
    }, this.delayMs);
    return this.latest;
  }

  /** Send immediately (initial load, explicit refresh button). */
  flush(): void {
    if (this.timer !== null) {
      this.timers.clearTimeout(this.timer);
      this.timer = null;
    }
    this.fire();
  }

  private fire(): void {
    if (this.pendingBody === null || this.inflight !== null) {
      return; // nothing new, or the in-flight settle handler will re-fire
    }
    const body = this.pendingBody;
    const token = this.pendingToken;
    this.pendingBody = null;
    this.inflight = token;
    this.events.onBusy?.(true);
    this.fetcher(body).then(
      (response) => this.settle(token, () => this.events.onResult(response)),
      (err: unknown) => this.settle(token, () => this.events.onError(String(err))),
    );
  }

  private settle(token: number, deliver: () => void): void {
    this.inflight = null;
    if (this.pendingBody !== null) {
      // superseded while in flight: discard this response, send the newer body
      this.fire();
      return;
    }
    if (token > this.applied) {
      this.applied = token;
      deliver();
    }
    this.events.onBusy?.(false);
  }
}
