import { describe, expect, it } from "vitest";

import type { Agreement, MethodItem } from "../src/api.js";
import {
  agreementHtml,
  confusionGrid,
  escapeHtml,
  methodCardHtml,
  probabilitySegments,
  progressHtml,
} from "../src/render.js";

describe("escapeHtml", () => {
  it("neutralizes markup in untrusted text", () => {
    expect(escapeHtml(`<b>&"'</b>`)).toBe("&lt;b&gt;&amp;&quot;&#39;&lt;/b&gt;");
  });
});

describe("probabilitySegments", () => {
  it("labels segments in class order with rounded percents", () => {
    const segments = probabilitySegments({ label: "SOURCE", probs: [0.7, 0.2, 0.1] });
    expect(segments).toEqual([
      { label: "SOURCE", percent: 70 },
      { label: "SINK", percent: 20 },
      { label: "NEITHER", percent: 10 },
    ]);
    const total = segments.reduce((acc, s) => acc + s.percent, 0);
    expect(total).toBeCloseTo(100, 5);
  });
});

describe("methodCardHtml", () => {
  const item: MethodItem = {
    signature: "a.B#get(int):String",
    docText: "Returns the <code>id</code>.",
    bodyText: "return ids[i];",
    prediction: { label: "SOURCE", probs: [0.8, 0.1, 0.1] },
  };

  it("shows documentation and source side by side, escaped", () => {
    const html = methodCardHtml(item, "labeling");
    expect(html).toContain("a.B#get(int):String");
    expect(html).toContain("&lt;code&gt;id&lt;/code&gt;");
    expect(html).toContain("return ids[i];");
    expect(html).not.toContain("model says");
  });

  it("adds the prediction banner only in triage mode", () => {
    const html = methodCardHtml(item, "triage");
    expect(html).toContain("model says <strong>SOURCE</strong>");
    expect(html).toContain("width:80%");
  });

  it("marks missing documentation explicitly", () => {
    const bare = methodCardHtml({ signature: "s", docText: "", bodyText: "b" }, "labeling");
    expect(bare).toContain("(no documentation)");
  });
});

describe("confusionGrid", () => {
  const confusion: Agreement["perLabelConfusion"] = {
    SOURCE: { SOURCE: 8, SINK: 2, NEITHER: 0 },
    SINK: { SOURCE: 0, SINK: 4, NEITHER: 0 },
    NEITHER: { SOURCE: 0, SINK: 0, NEITHER: 6 },
  };

  it("scales intensity to the largest cell", () => {
    const grid = confusionGrid(confusion);
    const flat = grid.flat();
    const top = flat.find((c) => c.row === "SOURCE" && c.col === "SOURCE")!;
    expect(top.intensity).toBe(1);
    const mid = flat.find((c) => c.row === "SINK" && c.col === "SINK")!;
    expect(mid.intensity).toBeCloseTo(0.5);
    expect(flat.filter((c) => c.count === 0).every((c) => c.intensity === 0)).toBe(true);
  });

  it("keeps the label order stable in rows and columns", () => {
    const grid = confusionGrid(confusion);
    expect(grid.map((row) => row[0]!.row)).toEqual(["SOURCE", "SINK", "NEITHER"]);
    expect(grid[0]!.map((c) => c.col)).toEqual(["SOURCE", "SINK", "NEITHER"]);
  });

  it("is all-zero-intensity for an empty confusion", () => {
    const zero = confusionGrid({
      SOURCE: { SOURCE: 0, SINK: 0, NEITHER: 0 },
      SINK: { SOURCE: 0, SINK: 0, NEITHER: 0 },
      NEITHER: { SOURCE: 0, SINK: 0, NEITHER: 0 },
    });
    expect(zero.flat().every((c) => c.intensity === 0)).toBe(true);
  });
});

describe("agreementHtml", () => {
  it("formats kappa to three decimals with both rater names", () => {
    const html = agreementHtml({
      raters: ["alice", "bob"],
      n: 50,
      kappa: 0.87321,
      perLabelConfusion: {
        SOURCE: { SOURCE: 20, SINK: 3, NEITHER: 0 },
        SINK: { SOURCE: 2, SINK: 15, NEITHER: 0 },
        NEITHER: { SOURCE: 0, SINK: 1, NEITHER: 9 },
      },
    });
    expect(html).toContain("0.873");
    expect(html).toContain("50 doubly-labeled methods");
    expect(html).toContain("alice vs bob");
  });
});

describe("progressHtml", () => {
  it("reports position over total", () => {
    expect(progressHtml(3, 36)).toContain("3 / 36");
  });
});
