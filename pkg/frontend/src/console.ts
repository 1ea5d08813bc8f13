// Headless console controller: everything the UI can do, minus the DOM.
// The browser layer (main.ts) and the round-trip tests both drive this class,
// so the tested behaviour is exactly what the operator gets.

import { ApiClient, ApiError } from "./api.js";
import {
  applyError,
  applyReport,
  applySummary,
  emptyView,
  type IncidentView,
} from "./state.js";
import type { EvidencePayload, IncidentConfigPayload, PosteriorReport } from "./types.js";
import { validateEvidence } from "./validate.js";

export class OperatorConsole {
  view: IncidentView = emptyView();
  private incidentId: string | null = null;

  constructor(private readonly api: ApiClient) {}

  get id(): string | null {
    return this.incidentId;
  }

  private queryNodes(): string[] {
    return this.view.summary?.query_nodes ?? ["D_t", "D_v", "Y_D"];
  }

  async create(config: IncidentConfigPayload): Promise<void> {
    const created = await this.api.createIncident(config);
    this.incidentId = created.id;
    await this.refresh();
  }

  async open(id: string): Promise<void> {
    this.incidentId = id;
    await this.refresh();
  }

  /** Poll the confirmed server state: summary then posteriors. */
  async refresh(): Promise<void> {
    if (!this.incidentId) {
      throw new Error("no incident open");
    }
    const summary = await this.api.getIncident(this.incidentId);
    this.view = applySummary(this.view, summary);
    const report = await this.api.getPosteriors(this.incidentId, this.queryNodes());
    this.view = applyReport(this.view, report);
  }

  /**
   * Validate locally (mirroring the server's binning ranges), then submit and
   * re-render from the confirmed state. Returns false when nothing was sent.
   */
  async submitEvidence(node: string, raw: string, source = "console"): Promise<boolean> {
    if (!this.incidentId || !this.view.summary) {
      throw new Error("no incident open");
    }
    const check = validateEvidence(this.view.summary.observables, node, raw);
    if (!check.ok) {
      this.view = applyError(this.view, check.message);
      return false;
    }
    try {
      await this.api.addEvidence(this.incidentId, { ...check.payload, source });
    } catch (err) {
      if (err instanceof ApiError) {
        this.view = applyError(this.view, `${err.code}: ${err.message}`);
        return false;
      }
      throw err;
    }
    await this.refresh();
    return true;
  }

  async retract(eid: string): Promise<void> {
    if (!this.incidentId) {
      throw new Error("no incident open");
    }
    try {
      await this.api.retractEvidence(this.incidentId, eid);
    } catch (err) {
      if (err instanceof ApiError) {
        this.view = applyError(this.view, `${err.code}: ${err.message}`);
        return;
      }
      throw err;
    }
    await this.refresh();
  }

  setOverlay(overlay: EvidencePayload[]): void {
    this.view = { ...this.view, overlay: overlay.map((e) => ({ node: e.node, value: e.value })) };
  }

  /** Side-by-side comparison; the server log is never mutated. */
  async runWhatIf(): Promise<{ baseline: PosteriorReport; overlaid: PosteriorReport }> {
    const baseline = this.view.report;
    if (!this.incidentId || !baseline) {
      throw new Error("no incident open");
    }
    const result = await this.api.whatIf(this.incidentId, this.view.overlay);
    this.view = { ...this.view, overlayReport: result.report, lastError: null };
    return { baseline, overlaid: result.report };
  }

  clearOverlay(): void {
    this.view = { ...this.view, overlay: [], overlayReport: null };
  }
}
