import { WorkbenchClient } from "./api";
import { renderExecutionView } from "./executionView";
import { renderMemoryView } from "./memoryView";
import { renderRequestPanel } from "./requestPanel";
import {
  appendHistory,
  currentResponse,
  initialState,
  nodeIndex,
  selectNode,
  selectStep,
  subtreeIds,
  type ViewState,
} from "./state";
import type { MemoryDocument, ScorerChoice, ServiceError, VersionInfo } from "./types";

export interface AppElements {
  request: HTMLElement;
  memory: HTMLElement;
  execution: HTMLElement;
}

/** Wires the three panels to the service. One query in flight at a time;
 * mutations are disabled while a query runs. */
export class WorkbenchApp {
  state: ViewState = initialState;
  memory: MemoryDocument | null = null;
  versions: VersionInfo[] = [];
  busy = false;
  error: { query: string; failure: ServiceError } | null = null;
  notice: string | null = null;
  collapsed = new Set<string>();

  constructor(
    readonly client: WorkbenchClient,
    readonly panels: AppElements,
  ) {}

  async init(): Promise<void> {
    await this.refreshMemory();
    this.render();
  }

  async refreshMemory(): Promise<void> {
    this.memory = await this.client.getMemory();
    this.versions = await this.client.getVersions();
  }

  displayedIds(): Set<string> {
    return this.memory ? new Set(nodeIndex(this.memory).keys()) : new Set();
  }

  highlightPath(): string[] {
    const response = currentResponse(this.state);
    if (!response?.topId) return [];
    const top = response.results.find((r) => r.id === response.topId);
    return top ? top.path : [];
  }

  async submit(query: string, scorerKind: ScorerChoice["kind"], topK: number): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.notice = null;
    this.render();
    try {
      const request = { query, scorer: { kind: scorerKind }, topK, includeTrace: true };
      const outcome = await this.client.postQuery(request);
      if (outcome.ok) {
        this.error = null;
        this.state = appendHistory(this.state, { request, response: outcome.body });
      } else {
        // history stays untouched on failure
        this.error = { query, failure: outcome.body };
      }
    } catch (failure) {
      this.error = { query, failure: { error: "network", message: String(failure) } };
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async mutate(specText: string, summary: string): Promise<void> {
    if (this.busy) return;
    let spec: Record<string, unknown>;
    try {
      spec = JSON.parse(specText);
    } catch (failure) {
      this.error = { query: "", failure: { error: "spec", message: `spec is not valid JSON: ${failure}` } };
      this.render();
      return;
    }
    this.busy = true;
    this.render();
    try {
      const outcome = await this.client.postMutate({ spec, summary });
      if (outcome.ok) {
        this.error = null;
        this.notice = `created ${outcome.body.versionId} (revision ${outcome.body.revision})`;
        await this.refreshMemory(); // the new branch appears without a reload
      } else {
        this.error = { query: "", failure: outcome.body };
      }
    } catch (failure) {
      this.error = { query: "", failure: { error: "network", message: String(failure) } };
    } finally {
      this.busy = false;
      this.render();
    }
  }

  handleSelectStep(index: number | null): void {
    this.state = selectStep(this.state, index);
    this.render();
  }

  handleSelectNode(nodeId: string): void {
    const next = this.state.selectedNode === nodeId ? null : nodeId;
    this.state = selectNode(this.state, next, this.displayedIds());
    this.render();
  }

  toggleCollapse(nodeId: string): void {
    if (this.collapsed.has(nodeId)) {
      this.collapsed.delete(nodeId);
    } else {
      this.collapsed.add(nodeId);
    }
    this.render();
  }

  render(): void {
    renderRequestPanel(this.panels.request, {
      history: this.state.history,
      busy: this.busy,
      error: this.error,
      notice: this.notice,
      onSubmit: (query, scorer, topK) => void this.submit(query, scorer, topK),
      onMutate: (spec, summary) => void this.mutate(spec, summary),
    });
    if (this.memory) {
      renderMemoryView(this.panels.memory, this.memory, {
        highlight: this.highlightPath(),
        selected: this.state.selectedNode,
        collapsed: this.collapsed,
        versionFilter: this.state.versionFilter,
        onSelect: (id) => this.handleSelectNode(id),
        onToggle: (id) => this.toggleCollapse(id),
      });
    }
    const index = this.memory ? nodeIndex(this.memory) : null;
    renderExecutionView(this.panels.execution, currentResponse(this.state), {
      selectedStep: this.state.selectedStep,
      selectedNode: this.state.selectedNode,
      subtreeOf: (nodeId) => {
        const node = index?.get(nodeId);
        return node ? subtreeIds(node) : [nodeId];
      },
      onSelectStep: (step) => this.handleSelectStep(step),
      onSelectNode: (id) => this.handleSelectNode(id),
    });
  }
}

function serviceBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("service") ?? "http://127.0.0.1:8000";
}

// browser bootstrap; absent in tests, which build the app themselves
if (typeof document !== "undefined") {
  const root = document.getElementById("workbench-root");
  if (root) {
    const app = new WorkbenchApp(new WorkbenchClient(serviceBaseUrl()), {
      request: root.querySelector("#request-panel") as HTMLElement,
      memory: root.querySelector("#memory-view") as HTMLElement,
      execution: root.querySelector("#execution-view") as HTMLElement,
    });
    void app.init();
  }
}
