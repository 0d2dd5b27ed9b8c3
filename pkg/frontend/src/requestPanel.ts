import { byteOffsetToCharIndex, type HistoryEntry } from "./state";
import type { ScorerChoice, ServiceError } from "./types";

// query templates lower the entry cost; users submit query text directly
export const TEMPLATES: { label: string; query: string }[] = [
  { label: "day packed with conference sessions", query: '//Day[ avg(/POI[ node ~= "conference" ]) ]' },
  { label: "third-day activities except the workshop", query: '//Day[3]/POI[1 - [node ~= "workshop"]]' },
  { label: "newest plan, day two", query: "/Version[-1]/Day[2]" },
  { label: "recover a deleted poster session", query: '//Version[node ~= "delete poster session"]//POI[node ~= "poster"]' },
];

export interface RequestPanelOptions {
  history: HistoryEntry[];
  busy: boolean;
  error: { query: string; failure: ServiceError } | null;
  notice: string | null;
  onSubmit: (query: string, scorer: ScorerChoice["kind"], topK: number) => void;
  onMutate: (specText: string, summary: string) => void;
}

function renderError(doc: Document, error: { query: string; failure: ServiceError }): HTMLElement {
  const box = doc.createElement("div");
  box.className = "query-error";
  if (error.failure.offset !== undefined) {
    // show the query with a caret under the reported byte offset
    const caretIndex = byteOffsetToCharIndex(error.query, error.failure.offset);
    const pre = doc.createElement("pre");
    pre.textContent = `${error.query}\n${" ".repeat(caretIndex)}^`;
    box.appendChild(pre);
  }
  const message = doc.createElement("p");
  message.textContent = error.failure.message;
  box.appendChild(message);
  return box;
}

export function renderRequestPanel(container: HTMLElement, opts: RequestPanelOptions): void {
  const doc = container.ownerDocument;
  container.replaceChildren();

  const form = doc.createElement("form");
  form.className = "query-form";

  const queryInput = doc.createElement("textarea");
  queryInput.name = "query";
  queryInput.rows = 2;
  queryInput.placeholder = "//Day[ avg(/POI[ node ~= \"conference\" ]) ]";
  form.appendChild(queryInput);

  const palette = doc.createElement("div");
  palette.className = "templates";
  for (const template of TEMPLATES) {
    const chip = doc.createElement("button");
    chip.type = "button";
    chip.className = "template";
    chip.textContent = template.label;
    chip.addEventListener("click", () => {
      queryInput.value = template.query;
    });
    palette.appendChild(chip);
  }
  form.appendChild(palette);

  const controls = doc.createElement("div");
  controls.className = "controls";
  const scorerSelect = doc.createElement("select");
  scorerSelect.name = "scorer";
  for (const kind of ["lexical", "embedding", "entailment"]) {
    const option = doc.createElement("option");
    option.value = kind;
    option.textContent = kind;
    scorerSelect.appendChild(option);
  }
  const topKInput = doc.createElement("input");
  topKInput.type = "number";
  topKInput.name = "topK";
  topKInput.min = "1";
  topKInput.value = "5";
  const submit = doc.createElement("button");
  submit.type = "submit";
  submit.textContent = opts.busy ? "running…" : "run query";
  submit.disabled = opts.busy;
  controls.append(scorerSelect, topKInput, submit);
  form.appendChild(controls);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (opts.busy) return;
    opts.onSubmit(
      queryInput.value,
      scorerSelect.value as ScorerChoice["kind"],
      Math.max(1, Number(topKInput.value) || 5),
    );
  });
  container.appendChild(form);

  if (opts.error) container.appendChild(renderError(doc, opts.error));
  if (opts.notice) {
    const note = doc.createElement("p");
    note.className = "notice";
    note.textContent = opts.notice;
    container.appendChild(note);
  }

  // mutation form; disabled while a query is in flight
  const mutateForm = doc.createElement("form");
  mutateForm.className = "mutate-form";
  const specInput = doc.createElement("textarea");
  specInput.name = "spec";
  specInput.rows = 2;
  specInput.placeholder = '{"action": "insert", "parent": "d2", "subtree": {...}}';
  const summaryInput = doc.createElement("input");
  summaryInput.name = "summary";
  summaryInput.placeholder = "edit summary";
  const mutateButton = doc.createElement("button");
  mutateButton.type = "submit";
  mutateButton.textContent = "apply edit";
  mutateButton.disabled = opts.busy;
  mutateForm.append(specInput, summaryInput, mutateButton);
  mutateForm.addEventListener("submit", (event) => {
    event.preventDefault();
    if (opts.busy) return;
    opts.onMutate(specInput.value, summaryInput.value);
  });
  container.appendChild(mutateForm);

  const historyList = doc.createElement("ol");
  historyList.className = "history";
  for (const entry of opts.history) {
    const item = doc.createElement("li");
    const top = entry.response.topId ?? "no match";
    item.textContent = `${entry.request.query} → ${top}`;
    historyList.appendChild(item);
  }
  container.appendChild(historyList);
}
