import { ApiClient } from "./api/client";
import type { AnalysisReport, AnalysisRequest, FeatureInfo } from "./api/types";

// At most one analysis request matters at a time: every submission gets a
// sequence number, the newest submission aborts the in-flight one, and a
// response is delivered only if its ticket is still the latest issued --
// a late response from an older submission is dropped, never rendered.

export class ExplorerState {
  readonly client: ApiClient;
  sessionId: string | null = null;
  features: FeatureInfo[] = [];
  lastReport: AnalysisReport | null = null;
  pendingRequest = false;

  private sequence = 0;
  private inFlight: AbortController | null = null;

  constructor(client: ApiClient) {
    this.client = client;
  }

  async openFixtureSession(name: string): Promise<void> {
    const session = await this.client.createSessionFromFixture(name);
    this.sessionId = session.sessionId;
    this.features = session.features;
    this.lastReport = null;
  }

  /** Returns the report if this submission is still the latest, else null. */
  async submitAnalysis(request: AnalysisRequest): Promise<AnalysisReport | null> {
    if (!this.sessionId) throw new Error("no open session");
    const ticket = ++this.sequence;
    this.inFlight?.abort();
    const controller = new AbortController();
    this.inFlight = controller;
    this.pendingRequest = true;
    try {
      const report = await this.client.runAnalysis(this.sessionId, request, controller.signal);
      if (ticket !== this.sequence) return null; // superseded while in flight
      this.lastReport = report;
      return report;
    } catch (error) {
      // a superseded request may reject (aborted transport); that's not an
      // error the user should see -- only the latest ticket may throw
      if (ticket !== this.sequence) return null;
      throw error;
    } finally {
      if (ticket === this.sequence) {
        this.pendingRequest = false;
        this.inFlight = null;
      }
    }
  }
}
