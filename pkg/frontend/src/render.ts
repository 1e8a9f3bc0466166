/** DOM-free rendering helpers: pure functions from API data to HTML
 * strings and view models, so they are testable without a browser. */

import type { Agreement, MethodItem, Prediction } from "./api.js";
import { LABELS } from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export interface ProbabilitySegment {
  label: string;
  percent: number;
}

/** Probability bar segments in label order; percents sum to ~100. */
export function probabilitySegments(prediction: Prediction): ProbabilitySegment[] {
  return prediction.probs.map((p, i) => ({
    label: LABELS[i] ?? `class ${i}`,
    percent: Math.round(p * 1000) / 10,
  }));
}

export function predictionBannerHtml(prediction: Prediction): string {
  const segments = probabilitySegments(prediction)
    .map(
      (s) =>
        `<span class="prob prob-${s.label.toLowerCase()}" style="width:${s.percent}%"` +
        ` title="${s.label} ${s.percent}%"></span>`,
    )
    .join("");
  return (
    `<div class="prediction">model says <strong>${escapeHtml(prediction.label)}</strong>` +
    `<span class="prob-bar">${segments}</span></div>`
  );
}

export function methodCardHtml(item: MethodItem, mode: "labeling" | "triage"): string {
  const prediction =
    mode === "triage" && item.prediction ? predictionBannerHtml(item.prediction) : "";
  return `
    <article class="method-card">
      <h2 class="signature">${escapeHtml(item.signature)}</h2>
      ${prediction}
      <div class="panes">
        <section class="pane doc-pane">
          <h3>Documentation</h3>
          <pre>${escapeHtml(item.docText) || "(no documentation)"}</pre>
        </section>
        <section class="pane body-pane">
          <h3>Source</h3>
          <pre>${escapeHtml(item.bodyText)}</pre>
        </section>
      </div>
    </article>`;
}

export interface HeatCell {
  row: string;
  col: string;
  count: number;
  /** 0..1, relative to the largest cell (1 when all counts are zero-free max). */
  intensity: number;
}

/** Confusion counts as a heat-map-ready grid, row rater first. */
export function confusionGrid(confusion: Agreement["perLabelConfusion"]): HeatCell[][] {
  const labels = LABELS.filter((l) => l in confusion);
  let max = 0;
  for (const row of labels) {
    for (const col of labels) {
      max = Math.max(max, confusion[row]?.[col] ?? 0);
    }
  }
  return labels.map((row) =>
    labels.map((col) => {
      const count = confusion[row]?.[col] ?? 0;
      return { row, col, count, intensity: max === 0 ? 0 : count / max };
    }),
  );
}

export function agreementHtml(agreement: Agreement): string {
  const grid = confusionGrid(agreement.perLabelConfusion);
  const header = grid[0]
    ? `<tr><th></th>${grid[0].map((c) => `<th>${c.col}</th>`).join("")}</tr>`
    : "";
  const rows = grid
    .map(
      (cells) =>
        `<tr><th>${cells[0]?.row ?? ""}</th>` +
        cells
          .map(
            (c) =>
              `<td class="heat" style="--heat:${c.intensity.toFixed(3)}">${c.count}</td>`,
          )
          .join("") +
        "</tr>",
    )
    .join("");
  return `
    <section class="agreement">
      <p class="kappa">kappa <strong>${agreement.kappa.toFixed(3)}</strong>
        over ${agreement.n} doubly-labeled methods
        (${agreement.raters.map(escapeHtml).join(" vs ")})</p>
      <table class="confusion">${header}${rows}</table>
    </section>`;
}

export function progressHtml(done: number, total: number): string {
  return `<span class="progress">${done} / ${total}</span>`;
}
