/** Long-poll loop over /v1/approvals/watch with backoff on gateway errors.
 * The watch endpoint returns as soon as anything is pending, so a new pause
 * reaches the UI within one round trip rather than a polling interval. */

import type { ApprovalRequest, GatewayClient } from './api.js';

export interface PollerHooks {
  onPending(pending: ApprovalRequest[]): void;
  onError(message: string): void;
}

export interface PollerOptions {
  timeoutS?: number;
  backoffMs?: number[];
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class ApprovalPoller {
  private running = false;
  private readonly timeoutS: number;
  private readonly backoffMs: number[];
  private readonly sleep: (ms: number) => Promise<void>;

  constructor(
    private readonly client: Pick<GatewayClient, 'watchApprovals'>,
    private readonly hooks: PollerHooks,
    options: PollerOptions = {},
  ) {
    this.timeoutS = options.timeoutS ?? 25;
    this.backoffMs = options.backoffMs ?? [500, 1000, 2000, 5000];
    this.sleep = options.sleep ?? defaultSleep;
  }

  start(): Promise<void> {
    if (this.running) return Promise.resolve();
    this.running = true;
    return this.loop();
  }

  stop(): void {
    this.running = false;
  }

  private async loop(): Promise<void> {
    let failures = 0;
    while (this.running) {
      try {
        const pending = await this.client.watchApprovals(this.timeoutS);
        failures = 0;
        if (!this.running) return;
        this.hooks.onPending(pending ?? []);
      } catch (error) {
        if (!this.running) return;
        this.hooks.onError(error instanceof Error ? error.message : String(error));
        const wait = this.backoffMs[Math.min(failures, this.backoffMs.length - 1)];
        failures += 1;
        await this.sleep(wait);
      }
    }
  }
}
