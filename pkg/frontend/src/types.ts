// Wire types mirroring the assessment service's JSON payloads.

export interface ExceedancePoint {
  x: number;
  p: number;
}

export interface NodeReport {
  node: string;
  kind: "interval" | "categorical";
  labels: string[];
  masses: number[];
  mode_index: number;
  mode_label: string;
  unit?: string;
  edges?: number[];
  mean?: number;
  sd?: number;
  exceedance?: ExceedancePoint[];
  p_inner_hull_breach?: number;
}

export interface PosteriorReport {
  nodes: Record<string, NodeReport>;
}

export interface ObservableSpec {
  node: string;
  kind: "interval" | "categorical";
  unit?: string;
  lo?: number;
  hi?: number;
  states?: string[];
}

export interface LogRecord {
  kind: "add" | "retract";
  timestamp: string;
  eid?: string;
  node?: string;
  value?: number | string;
  source?: string;
  target?: string;
}

export interface IncidentSummary {
  id: string;
  structure_hash: string;
  log_hash: string;
  evidence: LogRecord[];
  notes: string[];
  observables: ObservableSpec[];
  query_nodes: string[];
}

export interface EvidencePayload {
  node: string;
  value: number | string;
  timestamp?: string;
  source?: string;
}

export interface IncidentConfigPayload {
  id?: string;
  ship: Record<string, unknown>;
  model?: Record<string, unknown>;
  incident: Record<string, unknown>;
}
