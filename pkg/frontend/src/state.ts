import { CsaClient } from "./api";
import { ComputeParams, CsaReport, SessionInfo } from "./types";

export interface ViewParams {
  cap_mm: number;
  threshold_override_mm: number | null;
  refine: boolean;
}

export const DEFAULT_PARAMS: ViewParams = {
  cap_mm: 10,
  threshold_override_mm: null,
  refine: true,
};

export interface Visibility {
  organ: boolean;
  tumor: boolean;
  highlight: boolean;
}

/**
 * Client-side session state. Parameter edits accumulate in `params` but
 * the displayed result only changes when a recompute succeeds; a failed
 * or superseded request leaves the previous result in place. At most one
 * compute is in flight per session.
 */
export class ViewState {
  session: SessionInfo | null = null;
  params: ViewParams = { ...DEFAULT_PARAMS };
  visibility: Visibility = { organ: true, tumor: true, highlight: true };
  organOpacity = 0.35;
  result: CsaReport | null = null;
  lastError: string | null = null;
  private pending = false;

  constructor(private readonly client: CsaClient) {}

  get computePending(): boolean {
    return this.pending;
  }

  async loadPair(organ: Blob, tumor: Blob): Promise<SessionInfo> {
    const session = await this.client.createSession(organ, tumor);
    // previous session is discarded only once the new one exists
    this.session = session;
    this.result = null;
    this.params = { ...DEFAULT_PARAMS };
    this.lastError = null;
    return session;
  }

  setParams(edit: Partial<ViewParams>): void {
    this.params = { ...this.params, ...edit };
  }

  async recompute(): Promise<CsaReport | null> {
    if (this.session === null) throw new Error("no session loaded");
    if (this.pending) return null;
    this.pending = true;
    const body: ComputeParams = {
      cap_mm: this.params.cap_mm,
      threshold_override_mm: this.params.threshold_override_mm,
      refine: this.params.refine,
    };
    try {
      const report = await this.client.compute(this.session.session_id, body);
      this.result = report;
      this.lastError = null;
      return report;
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
      throw err;
    } finally {
      this.pending = false;
    }
  }
}
