// SVG histogram rendering. Pure string builders so the output is testable
// without a DOM; bar heights are proportional to the server-sent masses.

import type { NodeReport } from "./types.js";

export interface HistogramOptions {
  width?: number;
  height?: number;
  title?: string;
  accent?: string;
}

const DEFAULTS = { width: 420, height: 180, accent: "#0466c8" };

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderHistogram(rep: NodeReport, opts: HistogramOptions = {}): string {
  const { width, height, accent } = { ...DEFAULTS, ...opts };
  const pad = { left: 12, right: 12, top: 22, bottom: 26 };
  const plotW = width - pad.left - pad.right;
  const plotH = height - pad.top - pad.bottom;
  const peak = Math.max(...rep.masses, 1e-12);
  const n = rep.masses.length;

  const parts: string[] = [];
  parts.push(
    `<svg class="hist" viewBox="0 0 ${width} ${height}" role="img" ` +
      `aria-label="${esc(rep.node)} posterior histogram">`,
  );
  const title = opts.title ?? rep.node;
  parts.push(`<text x="${pad.left}" y="14" class="hist-title">${esc(title)}</text>`);

  // uniform slot per state; interval widths are annotated, not rescaled,
  // so narrow boundary bins stay visible
  const slot = plotW / n;
  for (let i = 0; i < n; i++) {
    const h = (rep.masses[i] / peak) * plotH;
    const x = pad.left + i * slot;
    const y = pad.top + (plotH - h);
    const cls = i === rep.mode_index ? "bar mode" : "bar";
    parts.push(
      `<rect class="${cls}" x="${x.toFixed(2)}" y="${y.toFixed(2)}" ` +
        `width="${Math.max(slot - 1, 0.5).toFixed(2)}" height="${h.toFixed(2)}" ` +
        `fill="${accent}"><title>${esc(rep.labels[i])}: ${(100 * rep.masses[i]).toFixed(2)}%</title></rect>`,
    );
  }

  // x-axis ticks: numeric edges for interval nodes, state labels otherwise
  if (rep.kind === "interval" && rep.edges) {
    const step = Math.max(1, Math.round(n / 6));
    for (let i = 0; i <= n; i += step) {
      const x = pad.left + i * slot;
      const edge = rep.edges[Math.min(i, rep.edges.length - 1)];
      parts.push(
        `<text x="${x.toFixed(2)}" y="${height - 8}" class="tick">${edge.toFixed(0)}</text>`,
      );
    }
  } else {
    const step = Math.max(1, Math.round(n / 8));
    for (let i = 0; i < n; i += step) {
      const x = pad.left + (i + 0.5) * slot;
      parts.push(
        `<text x="${x.toFixed(2)}" y="${height - 8}" class="tick middle">${esc(rep.labels[i])}</text>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("");
}

export function readoutLine(rep: NodeReport, deltaMean?: number, deltaSd?: number): string {
  if (rep.mean === undefined || rep.sd === undefined) {
    return `mode ${rep.mode_label}`;
  }
  const unit = rep.unit ?? "";
  const delta = (v?: number) =>
    v === undefined || Math.abs(v) < 5e-4 ? "" : ` (${v > 0 ? "+" : ""}${v.toFixed(2)})`;
  return (
    `mean ${rep.mean.toFixed(2)}${delta(deltaMean)} ${unit} · ` +
    `sd ${rep.sd.toFixed(2)}${delta(deltaSd)} ${unit} · mode ${rep.mode_label}`
  );
}
