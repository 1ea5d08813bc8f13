// Console view state and its pure update helpers. The console never computes
// probabilities: masses, means and sds come from the server as-is; the only
// client-side arithmetic is display formatting and mean/sd deltas.

import type {
  IncidentSummary,
  LogRecord,
  NodeReport,
  PosteriorReport,
} from "./types.js";

export interface Readout {
  mean?: number;
  sd?: number;
  deltaMean?: number;
  deltaSd?: number;
}

export interface IncidentView {
  summary: IncidentSummary | null;
  report: PosteriorReport | null;
  readouts: Record<string, Readout>;
  overlay: { node: string; value: number | string }[];
  overlayReport: PosteriorReport | null;
  lastError: string | null;
}

export function emptyView(): IncidentView {
  return {
    summary: null,
    report: null,
    readouts: {},
    overlay: [],
    overlayReport: null,
    lastError: null,
  };
}

export function applyReport(view: IncidentView, report: PosteriorReport): IncidentView {
  const readouts: Record<string, Readout> = {};
  for (const [node, rep] of Object.entries(report.nodes)) {
    const prev = view.readouts[node];
    readouts[node] = {
      mean: rep.mean,
      sd: rep.sd,
      deltaMean: prev?.mean !== undefined && rep.mean !== undefined ? rep.mean - prev.mean : undefined,
      deltaSd: prev?.sd !== undefined && rep.sd !== undefined ? rep.sd - prev.sd : undefined,
    };
  }
  return { ...view, report, readouts, lastError: null };
}

export function applySummary(view: IncidentView, summary: IncidentSummary): IncidentView {
  return { ...view, summary };
}

export function applyError(view: IncidentView, message: string): IncidentView {
  return { ...view, lastError: message };
}

/** Timeline rows in server log order, with retractions folded onto their target. */
export function timelineRows(summary: IncidentSummary): {
  eid: string;
  node: string;
  value: number | string;
  timestamp: string;
  source: string;
  retracted: boolean;
}[] {
  const retracted = new Set(
    summary.evidence.filter((r) => r.kind === "retract").map((r) => r.target),
  );
  return summary.evidence
    .filter((r): r is LogRecord & { kind: "add" } => r.kind === "add")
    .map((r) => ({
      eid: r.eid ?? "",
      node: r.node ?? "",
      value: r.value ?? "",
      timestamp: r.timestamp,
      source: r.source ?? "",
      retracted: retracted.has(r.eid),
    }));
}

/** Percentage labels for a histogram; rounding may leave the sum at 100 +- a rounding step. */
export function percentLabels(rep: NodeReport): string[] {
  return rep.masses.map((m) => `${(100 * m).toFixed(1)}%`);
}

export function breachBadge(rep: NodeReport | undefined): string | null {
  if (!rep || rep.p_inner_hull_breach === undefined) {
    return null;
  }
  return `${(100 * rep.p_inner_hull_breach).toFixed(0)}%`;
}
