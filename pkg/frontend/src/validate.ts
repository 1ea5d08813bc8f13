// Client-side evidence validation mirroring the server's binning ranges, so
// obviously inadmissible entries never leave the browser.

import type { EvidencePayload, ObservableSpec } from "./types.js";

export type ValidationResult =
  | { ok: true; payload: EvidencePayload }
  | { ok: false; message: string };

export function findObservable(
  observables: ObservableSpec[],
  node: string,
): ObservableSpec | undefined {
  return observables.find((o) => o.node === node);
}

export function validateEvidence(
  observables: ObservableSpec[],
  node: string,
  raw: string,
): ValidationResult {
  const spec = findObservable(observables, node);
  if (!spec) {
    return { ok: false, message: `${node} is not an observable node of this model` };
  }
  const trimmed = raw.trim();
  if (trimmed === "") {
    return { ok: false, message: "enter a value" };
  }
  if (spec.kind === "categorical") {
    const states = spec.states ?? [];
    if (!states.includes(trimmed)) {
      return { ok: false, message: `${node} must be one of: ${states.join(", ")}` };
    }
    return { ok: true, payload: { node, value: trimmed } };
  }
  const value = Number(trimmed);
  if (!Number.isFinite(value)) {
    return { ok: false, message: `${node} expects a number` };
  }
  if (spec.lo !== undefined && spec.hi !== undefined && (value < spec.lo || value > spec.hi)) {
    const unit = spec.unit ? ` ${spec.unit}` : "";
    return {
      ok: false,
      message: `${node}=${value} outside the admissible range [${spec.lo}, ${spec.hi}]${unit}`,
    };
  }
  return { ok: true, payload: { node, value } };
}
