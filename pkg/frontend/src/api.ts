/** Typed client for the labeling/triage HTTP API. */

export type Label = "SOURCE" | "SINK" | "NEITHER";
export type Verdict = "TP" | "FP";
export type Mode = "labeling" | "triage";
export type QueueOrder = "forward" | "reverse";

export const LABELS: readonly Label[] = ["SOURCE", "SINK", "NEITHER"];
export const VERDICTS: readonly Verdict[] = ["TP", "FP"];

export interface Prediction {
  label: Label;
  /** [p_source, p_sink, p_neither] */
  probs: number[];
}

export interface MethodItem {
  signature: string;
  docText: string;
  bodyText: string;
  prediction?: Prediction;
}

export interface MethodsPage {
  items: MethodItem[];
  nextCursor: number | null;
  total: number;
}

export interface LabelRecord {
  rater: string;
  signature: string;
  label: Label;
  history: number;
}

export interface Agreement {
  raters: string[];
  n: number;
  kappa: number;
  perLabelConfusion: Record<string, Record<string, number>>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export function methodsUrl(cursor: number, mode: Mode, order: QueueOrder): string {
  const params = new URLSearchParams({
    cursor: String(cursor),
    mode,
    order,
  });
  return `/api/methods?${params.toString()}`;
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const doc = (await response.json()) as { error?: string };
    if (doc && typeof doc.error === "string") return doc.error;
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as T;
  }

  methodsPage(cursor: number, mode: Mode, order: QueueOrder = "forward"): Promise<MethodsPage> {
    return this.getJson<MethodsPage>(methodsUrl(cursor, mode, order));
  }

  /** Walk the cursor chain until the server reports no next page. */
  async allMethods(mode: Mode, order: QueueOrder = "forward"): Promise<MethodItem[]> {
    const out: MethodItem[] = [];
    let cursor: number | null = 0;
    while (cursor !== null) {
      const page: MethodsPage = await this.methodsPage(cursor, mode, order);
      out.push(...page.items);
      cursor = page.nextCursor;
    }
    return out;
  }

  postLabel(rater: string, signature: string, label: Label): Promise<LabelRecord> {
    return this.postJson<LabelRecord>("/api/labels", { rater, signature, label });
  }

  postVerdict(rater: string, signature: string, verdict: Verdict): Promise<unknown> {
    return this.postJson("/api/triage", { rater, signature, verdict });
  }

  agreement(): Promise<Agreement> {
    return this.getJson<Agreement>("/api/agreement");
  }

  async exportCsv(): Promise<string> {
    const response = await this.fetchImpl(this.baseUrl + "/api/export");
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return response.text();
  }

  async exportTriageCsv(): Promise<string> {
    const response = await this.fetchImpl(this.baseUrl + "/api/triage/export");
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return response.text();
  }
}
