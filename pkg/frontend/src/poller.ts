/** Version-keyed polling. The session document is refetched on an interval
 * (default 2 s) and listeners fire only when the version changes, so views
 * refresh in place without a full reload. */

import type { WorkbenchClient } from "./api.js";
import type { SessionDocument } from "./types.js";

export interface PollerOptions {
  /** Poll interval in milliseconds. */
  intervalMs?: number;
  onChange: (document: SessionDocument) => void;
  onError?: (error: unknown) => void;
}

export const DEFAULT_POLL_INTERVAL_MS = 2000;

export class SessionPoller {
  private timer: ReturnType<typeof setInterval> | null = null;
  private lastVersion: number | null = null;
  private readonly intervalMs: number;

  constructor(
    private readonly client: WorkbenchClient,
    private readonly sessionId: string,
    private readonly options: PollerOptions,
  ) {
    this.intervalMs = options.intervalMs ?? DEFAULT_POLL_INTERVAL_MS;
  }

  start(): void {
    if (this.timer !== null) {
      return;
    }
    this.timer = setInterval(() => {
      void this.poll();
    }, this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** One fetch; notifies onChange only when the version moved. */
  async poll(): Promise<void> {
    let document: SessionDocument;
    try {
      document = await this.client.getSession(this.sessionId);
    } catch (error) {
      this.options.onError?.(error);
      return;
    }
    if (document.session.version !== this.lastVersion) {
      this.lastVersion = document.session.version;
      this.options.onChange(document);
    }
  }
}
