import type { QueryResponse, TraceStep } from "./types";

export interface ExecutionViewOptions {
  selectedStep: number | null;
  selectedNode: string | null;
  /** node -> ids of its subtree, for attributing evidence sub-scores */
  subtreeOf: (nodeId: string) => string[];
  onSelectStep: (index: number | null) => void;
  onSelectNode: (nodeId: string) => void;
}

function formatWeight(weight: number): string {
  return weight.toFixed(3);
}

function renderStepRow(doc: Document, step: TraceStep, opts: ExecutionViewOptions): HTMLElement {
  const row = doc.createElement("li");
  row.dataset.step = String(step.index);
  const button = doc.createElement("button");
  button.className = "step-row";
  if (opts.selectedStep === step.index) button.classList.add("selected");
  button.textContent = `${step.index + 1}. ${step.step} → ${step.output.length} nodes`;
  button.addEventListener("click", () => {
    opts.onSelectStep(opts.selectedStep === step.index ? null : step.index);
  });
  row.appendChild(button);

  if (opts.selectedStep === step.index) {
    const outputs = doc.createElement("ul");
    outputs.className = "step-output";
    for (const [nodeId, weight] of step.output) {
      const entry = doc.createElement("li");
      const pick = doc.createElement("button");
      pick.className = "node-weight";
      if (opts.selectedNode === nodeId) pick.classList.add("selected");
      pick.dataset.id = nodeId;
      pick.textContent = `${nodeId}  ${formatWeight(weight)}`;
      pick.addEventListener("click", () => opts.onSelectNode(nodeId));
      entry.appendChild(pick);
      outputs.appendChild(entry);
    }
    row.appendChild(outputs);

    if (opts.selectedNode !== null) {
      const within = new Set(opts.subtreeOf(opts.selectedNode));
      const scores = step.relevance.filter(([nodeId]) => within.has(nodeId));
      const panel = doc.createElement("div");
      panel.className = "node-scores";
      const title = doc.createElement("h4");
      title.textContent = `relevance scores for ${opts.selectedNode}`;
      panel.appendChild(title);
      const list = doc.createElement("ul");
      for (const [nodeId, expr, score] of scores) {
        const line = doc.createElement("li");
        line.dataset.id = nodeId;
        line.textContent = `${nodeId}: ${formatWeight(score)} ← ${expr}`;
        list.appendChild(line);
      }
      if (!scores.length) {
        const line = doc.createElement("li");
        line.textContent = "no relevance expression scored this node";
        list.appendChild(line);
      }
      panel.appendChild(list);
      row.appendChild(panel);
    }
  }
  return row;
}

/** One row per executed step; drill into weighted sets and sub-scores. */
export function renderExecutionView(
  container: HTMLElement,
  response: QueryResponse | null,
  opts: ExecutionViewOptions,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  if (!response?.trace) {
    container.classList.add("hidden");
    return;
  }
  container.classList.remove("hidden");

  const summary = doc.createElement("p");
  summary.className = "context-size";
  summary.textContent = `top match ${response.topId ?? "—"} · ${response.contextTokenCount} context tokens`;
  container.appendChild(summary);

  const list = doc.createElement("ol");
  list.className = "trace-steps";
  for (const step of response.trace.steps) {
    list.appendChild(renderStepRow(doc, step, opts));
  }
  if (!response.trace.steps.length) {
    const empty = doc.createElement("p");
    empty.textContent = "empty query: the root passes through unchanged";
    container.appendChild(empty);
  }
  container.appendChild(list);
}
