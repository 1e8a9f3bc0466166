/** Queue and decision bookkeeping for one rater's labeling session.
 *
 * Decisions are append-only: re-deciding a signature records a
 * superseding entry, and `latestDecisions` collapses to the newest one,
 * mirroring the server's export semantics.
 */

import type { Label, MethodItem, Verdict } from "./api.js";

export interface Decision {
  signature: string;
  label: Label;
}

/** Sensitive-data cues shown beside the documentation as a decision aid. */
export const SENSITIVE_DATA_CHECKLIST: readonly string[] = [
  "identifies the user, account, or contacts",
  "identifies the device or SIM",
  "reveals physical location",
  "reads message, call, or browsing history",
  "reads files, media, or the clipboard",
  "sends data off the device (network, SMS, broadcast)",
  "writes to shared or persistent storage",
];

export class LabelSession {
  private position = 0;
  private readonly decisions: Decision[] = [];

  constructor(
    readonly rater: string,
    readonly queue: readonly MethodItem[],
  ) {}

  get index(): number {
    return this.position;
  }

  current(): MethodItem | null {
    return this.queue[this.position] ?? null;
  }

  isDone(): boolean {
    return this.position >= this.queue.length;
  }

  /** Record a decision for the current method and advance. */
  decide(label: Label): Decision | null {
    const item = this.current();
    if (item === null) return null;
    const decision = { signature: item.signature, label };
    this.decisions.push(decision);
    this.position += 1;
    return decision;
  }

  skip(): void {
    if (!this.isDone()) this.position += 1;
  }

  back(): void {
    if (this.position > 0) this.position -= 1;
  }

  /** Every decision ever made, oldest first (the audit trail). */
  history(): readonly Decision[] {
    return this.decisions;
  }

  /** signature -> newest label, superseded entries collapsed away. */
  latestDecisions(): Map<string, Label> {
    const out = new Map<string, Label>();
    for (const d of this.decisions) out.set(d.signature, d.label);
    return out;
  }

  decidedCount(): number {
    return this.latestDecisions().size;
  }

  progress(): { done: number; total: number } {
    return { done: Math.min(this.position, this.queue.length), total: this.queue.length };
  }
}

/** Keyboard shortcuts: labeling uses s/k/n, triage t/f, space skips. */
export function labelForKey(key: string): Label | null {
  switch (key.toLowerCase()) {
    case "s":
      return "SOURCE";
    case "k":
      return "SINK";
    case "n":
      return "NEITHER";
    default:
      return null;
  }
}

export function verdictForKey(key: string): Verdict | null {
  switch (key.toLowerCase()) {
    case "t":
      return "TP";
    case "f":
      return "FP";
    default:
      return null;
  }
}
