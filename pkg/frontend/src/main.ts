/** Browser bootstrap: wires the API client, session state, and keyboard
 * shortcuts into the three screens (label, triage, agreement). */

import { ApiClient, ApiError, type Mode, type QueueOrder } from "./api.js";
import {
  LabelSession,
  SENSITIVE_DATA_CHECKLIST,
  labelForKey,
  verdictForKey,
} from "./session.js";
import { agreementHtml, methodCardHtml, progressHtml } from "./render.js";

const api = new ApiClient();

const screen = document.getElementById("screen") as HTMLElement;
const status = document.getElementById("status") as HTMLElement;
const raterInput = document.getElementById("rater") as HTMLInputElement;
const orderSelect = document.getElementById("order") as HTMLSelectElement;

let mode: Mode | "agreement" = "labeling";
let session: LabelSession | null = null;

function setStatus(text: string): void {
  status.textContent = text;
}

function checklistHtml(): string {
  const items = SENSITIVE_DATA_CHECKLIST.map(
    (c) => `<li><label><input type="checkbox"> ${c}</label></li>`,
  ).join("");
  return `<aside class="checklist"><h3>Does this method touch data that…</h3><ul>${items}</ul></aside>`;
}

function buttonsHtml(): string {
  if (mode === "triage") {
    return `
      <div class="buttons">
        <button data-verdict="TP">true positive <kbd>t</kbd></button>
        <button data-verdict="FP">false positive <kbd>f</kbd></button>
        <button data-skip>skip <kbd>space</kbd></button>
      </div>`;
  }
  return `
    <div class="buttons">
      <button data-label="SOURCE">source <kbd>s</kbd></button>
      <button data-label="SINK">sink <kbd>k</kbd></button>
      <button data-label="NEITHER">neither <kbd>n</kbd></button>
      <button data-skip>skip <kbd>space</kbd></button>
    </div>`;
}

function renderCurrent(): void {
  if (session === null) return;
  const item = session.current();
  const { done, total } = session.progress();
  if (item === null) {
    screen.innerHTML = `<p class="done">Queue finished: ${done} of ${total} reviewed.</p>`;
    return;
  }
  screen.innerHTML =
    progressHtml(done, total) +
    methodCardHtml(item, mode === "triage" ? "triage" : "labeling") +
    (mode === "labeling" ? checklistHtml() : "") +
    buttonsHtml();
}

async function refreshAgreement(): Promise<void> {
  try {
    const agreement = await api.agreement();
    screen.innerHTML = agreementHtml(agreement);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      screen.innerHTML = "<p>No method has been labeled by two raters yet.</p>";
    } else {
      throw err;
    }
  }
}

async function loadQueue(): Promise<void> {
  const rater = raterInput.value.trim() || "rater";
  const order = orderSelect.value as QueueOrder;
  try {
    const items = await api.allMethods(mode === "triage" ? "triage" : "labeling", order);
    session = new LabelSession(rater, items);
    renderCurrent();
    setStatus(`${items.length} methods queued for ${rater}`);
  } catch (err) {
    if (err instanceof ApiError) {
      screen.innerHTML = `<p class="error">${err.status}: ${err.message}</p>`;
    } else {
      throw err;
    }
  }
}

async function submitCurrent(kind: "label" | "verdict", value: string): Promise<void> {
  if (session === null) return;
  const item = session.current();
  if (item === null) return;
  try {
    if (kind === "label") {
      await api.postLabel(session.rater, item.signature, value as never);
      session.decide(value as never);
    } else {
      await api.postVerdict(session.rater, item.signature, value as never);
      session.skip();
    }
    renderCurrent();
    setStatus(`${item.signature} -> ${value}`);
  } catch (err) {
    if (err instanceof ApiError) setStatus(`rejected (${err.status}): ${err.message}`);
    else throw err;
  }
}

screen.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const button = target.closest("button");
  if (!button || session === null) return;
  if (button.dataset.label) void submitCurrent("label", button.dataset.label);
  else if (button.dataset.verdict) void submitCurrent("verdict", button.dataset.verdict);
  else if ("skip" in button.dataset) {
    session.skip();
    renderCurrent();
  }
});

document.addEventListener("keydown", (event) => {
  if (event.target instanceof HTMLInputElement) return;
  if (mode === "agreement" || session === null) return;
  if (event.key === " ") {
    event.preventDefault();
    session.skip();
    renderCurrent();
    return;
  }
  if (mode === "labeling") {
    const label = labelForKey(event.key);
    if (label) void submitCurrent("label", label);
  } else {
    const verdict = verdictForKey(event.key);
    if (verdict) void submitCurrent("verdict", verdict);
  }
});

for (const tab of document.querySelectorAll<HTMLButtonElement>("nav [data-mode]")) {
  tab.addEventListener("click", () => {
    mode = tab.dataset.mode as Mode | "agreement";
    for (const t of document.querySelectorAll("nav [data-mode]")) {
      t.classList.toggle("active", t === tab);
    }
    if (mode === "agreement") void refreshAgreement();
    else void loadQueue();
  });
}

document.getElementById("reload")?.addEventListener("click", () => {
  if (mode === "agreement") void refreshAgreement();
  else void loadQueue();
});

void loadQueue();
