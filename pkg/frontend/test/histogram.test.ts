import { describe, expect, it } from "vitest";

import { readoutLine, renderHistogram } from "../src/histogram.js";
import { renderCrossSection } from "../src/sketch.js";
import type { NodeReport, PosteriorReport } from "../src/types.js";

const DV: NodeReport = {
  node: "D_v",
  kind: "interval",
  labels: ["OB", "IB0", "IB1", "IB2"],
  masses: [0.1, 0.2, 0.4, 0.3],
  mode_index: 2,
  mode_label: "IB1",
  edges: [0, 2.025, 2.7, 3.24, 3.78],
  unit: "m",
  mean: 2.8,
  sd: 0.6,
  p_inner_hull_breach: 0.85,
};

describe("histogram rendering", () => {
  it("draws one bar per state with heights proportional to the masses", () => {
    const svg = renderHistogram(DV);
    const heights = [...svg.matchAll(/height="([0-9.]+)"/g)].map((m) => parseFloat(m[1]));
    expect(heights).toHaveLength(DV.masses.length);
    // bar heights scale on the server-sent masses (no renormalization)
    expect(heights[2]).toBeGreaterThan(heights[1]);
    expect(heights[0] / heights[2]).toBeCloseTo(0.1 / 0.4, 6);
  });

  it("labels penetration states by name instead of raw metres", () => {
    const svg = renderHistogram(DV);
    expect(svg).toContain("OB");
    expect(svg).toContain("IB1");
  });

  it("marks the mode bar", () => {
    const svg = renderHistogram(DV);
    expect(svg.match(/class="bar mode"/g)).toHaveLength(1);
  });

  it("readout line shows mean, sd and deltas", () => {
    expect(readoutLine(DV)).toContain("mean 2.80");
    expect(readoutLine(DV, 0.25, -0.1)).toContain("(+0.25)");
  });
});

describe("cross-section sketch", () => {
  it("places the damage box from the posterior means", () => {
    const rep: PosteriorReport = {
      nodes: {
        D_t: { ...DV, node: "D_t", mean: 6.0 },
        D_v: DV,
        Y_D: { ...DV, node: "Y_D", mean: -1.0, p_inner_hull_breach: undefined },
      },
    };
    const svg = renderCrossSection(rep, { breadth: 60, depth: 29.7, doubleBottom: 2.7 });
    expect(svg).toContain('class="damage"');
    expect(svg).toContain('class="dbline"');
    expect(svg).toContain("width 6.0 m");
  });

  it("omits the damage box while means are unknown", () => {
    const rep: PosteriorReport = { nodes: {} };
    const svg = renderCrossSection(rep, { breadth: 60, depth: 29.7 });
    expect(svg).not.toContain('class="damage"');
  });
});
