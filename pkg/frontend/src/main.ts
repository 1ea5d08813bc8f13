// Browser wiring for the operator console.

import { ApiClient } from "./api.js";
import { OperatorConsole } from "./console.js";
import { readoutLine, renderHistogram } from "./histogram.js";
import { renderCrossSection, type SketchGeometry } from "./sketch.js";
import { breachBadge, timelineRows } from "./state.js";
import type { EvidencePayload } from "./types.js";

const api = new ApiClient("");
const console_ = new OperatorConsole(api);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function sketchGeometry(): SketchGeometry | null {
  const cfgText = (el<HTMLTextAreaElement>("config-input")).value;
  try {
    const cfg = JSON.parse(cfgText);
    return {
      breadth: Number(cfg.ship?.breadth_m ?? 0) || 50,
      depth: Number(cfg.ship?.depth_m ?? 0) || 25,
      doubleBottom: cfg.ship?.double_bottom_height_m
        ? Number(cfg.ship.double_bottom_height_m)
        : undefined,
    };
  } catch {
    return null;
  }
}

function render(): void {
  const { summary, report, readouts, overlayReport, lastError } = console_.view;
  el("error-box").textContent = lastError ?? "";
  el("error-box").style.display = lastError ? "block" : "none";
  if (!summary) {
    return;
  }
  el("incident-id").textContent = summary.id;
  el("log-hash").textContent = summary.log_hash.slice(0, 12);

  // evidence form node choices follow the server's observable catalog
  const select = el<HTMLSelectElement>("evidence-node");
  const current = select.value;
  select.innerHTML = "";
  for (const obs of summary.observables) {
    const opt = document.createElement("option");
    opt.value = obs.node;
    const range =
      obs.kind === "interval"
        ? `[${obs.lo}, ${obs.hi}] ${obs.unit ?? ""}`
        : (obs.states ?? []).join("/");
    opt.textContent = `${obs.node}  ${range}`;
    select.appendChild(opt);
  }
  if (current) {
    select.value = current;
  }

  if (report) {
    const panels = el("histograms");
    panels.innerHTML = "";
    for (const nid of summary.query_nodes) {
      const rep = report.nodes[nid];
      if (!rep) {
        continue;
      }
      const card = document.createElement("div");
      card.className = "card";
      const delta = readouts[nid];
      card.innerHTML =
        renderHistogram(rep) +
        `<p class="readout">${readoutLine(rep, delta?.deltaMean, delta?.deltaSd)}</p>`;
      panels.appendChild(card);
    }
    const badge = breachBadge(report.nodes["D_v"]);
    el("ihb-badge").textContent = badge ? `inner hull breach ${badge}` : "";
    const geom = sketchGeometry();
    el("sketch").innerHTML = geom ? renderCrossSection(report, geom) : "";
  }

  const rows = timelineRows(summary);
  const timeline = el("timeline");
  timeline.innerHTML = "";
  for (const row of rows) {
    const li = document.createElement("li");
    li.className = row.retracted ? "retracted" : "";
    li.textContent = `${row.timestamp.slice(11, 19)}  ${row.node} = ${row.value}  (${row.source})`;
    if (!row.retracted) {
      const btn = document.createElement("button");
      btn.textContent = "retract";
      btn.onclick = async () => {
        await console_.retract(row.eid);
        render();
      };
      li.appendChild(btn);
    }
    timeline.appendChild(li);
  }

  const comparison = el("what-if-panels");
  comparison.innerHTML = "";
  if (overlayReport && report) {
    for (const nid of summary.query_nodes) {
      const base = report.nodes[nid];
      const over = overlayReport.nodes[nid];
      if (!base || !over) {
        continue;
      }
      const pair = document.createElement("div");
      pair.className = "pair";
      pair.innerHTML =
        `<div class="card">${renderHistogram(base, { title: `${nid} baseline` })}` +
        `<p class="readout">${readoutLine(base)}</p></div>` +
        `<div class="card">${renderHistogram(over, { title: `${nid} what-if`, accent: "#117a65" })}` +
        `<p class="readout">${readoutLine(over)}</p></div>`;
      comparison.appendChild(pair);
    }
  }
}

async function guard(action: () => Promise<unknown>): Promise<void> {
  try {
    await action();
  } catch (err) {
    console_.view = { ...console_.view, lastError: String(err) };
  }
  render();
}

function overlayFromInput(): EvidencePayload[] {
  const text = el<HTMLTextAreaElement>("overlay-input").value.trim();
  if (!text) {
    return [];
  }
  return JSON.parse(text) as EvidencePayload[];
}

export function boot(): void {
  el("create-btn").onclick = () =>
    guard(async () => {
      const cfg = JSON.parse(el<HTMLTextAreaElement>("config-input").value);
      await console_.create(cfg);
    });
  el("open-btn").onclick = () =>
    guard(() => console_.open(el<HTMLInputElement>("open-id").value.trim()));
  el("evidence-btn").onclick = () =>
    guard(() =>
      console_.submitEvidence(
        el<HTMLSelectElement>("evidence-node").value,
        el<HTMLInputElement>("evidence-value").value,
      ),
    );
  el("what-if-btn").onclick = () =>
    guard(async () => {
      console_.setOverlay(overlayFromInput());
      await console_.runWhatIf();
    });
  el("what-if-clear").onclick = () =>
    guard(async () => {
      console_.clearOverlay();
    });
  el("refresh-btn").onclick = () => guard(() => console_.refresh());
}

if (typeof document !== "undefined") {
  boot();
}
