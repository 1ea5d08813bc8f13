// Thin fetch client for the assessment service. Server-side failure payloads
// ({"error": {code, reason}}) surface verbatim as ApiError so the console can
// show exactly what the engine said.

import type {
  EvidencePayload,
  IncidentConfigPayload,
  IncidentSummary,
  PosteriorReport,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, reason: string) {
    super(reason);
    this.status = status;
    this.code = code;
  }
}

async function parseError(resp: Response): Promise<never> {
  let code = "HttpError";
  let reason = `${resp.status} ${resp.statusText}`;
  try {
    const body = await resp.json();
    if (body?.error) {
      code = body.error.code ?? code;
      if (body.error.reason) {
        reason = body.error.reason;
      } else if (Array.isArray(body.error.fields)) {
        reason = body.error.fields
          .map((f: { field: string; reason: string }) => `${f.field}: ${f.reason}`)
          .join("; ");
      }
    }
  } catch {
    // non-JSON body: keep the HTTP status text
  }
  throw new ApiError(resp.status, code, reason);
}

export class ApiClient {
  constructor(private readonly base: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(`${this.base}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!resp.ok) {
      await parseError(resp);
    }
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/healthz");
  }

  createIncident(config: IncidentConfigPayload): Promise<{
    id: string;
    structure_hash: string;
    report: PosteriorReport;
  }> {
    return this.request("/incidents", { method: "POST", body: JSON.stringify(config) });
  }

  getIncident(id: string): Promise<IncidentSummary> {
    return this.request(`/incidents/${encodeURIComponent(id)}`);
  }

  getPosteriors(id: string, nodes: string[]): Promise<PosteriorReport> {
    const qs = encodeURIComponent(nodes.join(","));
    return this.request(`/incidents/${encodeURIComponent(id)}/posteriors?nodes=${qs}`);
  }

  addEvidence(id: string, evidence: EvidencePayload): Promise<{
    evidence_id: string;
    log_hash: string;
    report: PosteriorReport;
  }> {
    return this.request(`/incidents/${encodeURIComponent(id)}/evidence`, {
      method: "POST",
      body: JSON.stringify(evidence),
    });
  }

  retractEvidence(id: string, eid: string): Promise<{ log_hash: string; report: PosteriorReport }> {
    return this.request(
      `/incidents/${encodeURIComponent(id)}/evidence/${encodeURIComponent(eid)}`,
      { method: "DELETE" },
    );
  }

  whatIf(id: string, overlay: EvidencePayload[]): Promise<{
    log_hash: string;
    report: PosteriorReport;
  }> {
    return this.request(`/incidents/${encodeURIComponent(id)}/what-if`, {
      method: "POST",
      body: JSON.stringify({ overlay }),
    });
  }
}
