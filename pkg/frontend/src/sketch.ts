// Cross-section damage sketch: hull box, waterline, double bottom and the
// current damage estimate (width x penetration centred at the location mean).

import type { PosteriorReport } from "./types.js";

export interface SketchGeometry {
  breadth: number;        // m
  depth: number;          // m
  doubleBottom?: number;  // h_db, m
}

export function renderCrossSection(
  report: PosteriorReport,
  geom: SketchGeometry,
  width = 420,
  height = 200,
): string {
  const dt = report.nodes["D_t"];
  const dv = report.nodes["D_v"];
  const yd = report.nodes["Y_D"];
  const pad = 18;
  const sx = (width - 2 * pad) / geom.breadth;
  const hullH = height - 2 * pad;
  const sy = hullH / Math.max(geom.depth, 1);

  const x0 = pad;
  const yBottom = height - pad;
  const parts: string[] = [];
  parts.push(
    `<svg class="sketch" viewBox="0 0 ${width} ${height}" role="img" aria-label="cross-section damage sketch">`,
  );
  // hull outline (port on the left)
  parts.push(
    `<rect class="hull" x="${x0}" y="${pad}" width="${geom.breadth * sx}" height="${hullH}" ` +
      `fill="none" stroke="#12222f" stroke-width="2"/>`,
  );
  parts.push(`<text x="${x0 + 4}" y="${pad + 14}" class="tick">port</text>`);
  parts.push(
    `<text x="${x0 + geom.breadth * sx - 4}" y="${pad + 14}" class="tick end">stbd</text>`,
  );
  if (geom.doubleBottom) {
    const yDb = yBottom - geom.doubleBottom * sy;
    parts.push(
      `<line class="dbline" x1="${x0}" y1="${yDb.toFixed(1)}" x2="${x0 + geom.breadth * sx}" ` +
        `y2="${yDb.toFixed(1)}" stroke="#516574" stroke-dasharray="6 4"/>`,
    );
  }
  if (dt?.mean !== undefined && dv?.mean !== undefined) {
    // location mean defaults to the centreline when the model has no Y_D node;
    // positive locations are to port, drawn on the left
    const centre = yd?.mean ?? 0;
    const left = x0 + (geom.breadth / 2 - centre - dt.mean / 2) * sx;
    const w = Math.max(dt.mean * sx, 2);
    const h = Math.max(dv.mean * sy, 2);
    parts.push(
      `<rect class="damage" x="${left.toFixed(1)}" y="${(yBottom - h).toFixed(1)}" ` +
        `width="${w.toFixed(1)}" height="${h.toFixed(1)}" fill="#b42318" fill-opacity="0.55">` +
        `<title>width ${dt.mean.toFixed(1)} m, penetration ${dv.mean.toFixed(1)} m` +
        `${yd?.mean !== undefined ? `, centre ${yd.mean.toFixed(1)} m` : ""}</title></rect>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
