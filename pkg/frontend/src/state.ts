import type { MemoryDocument, NodeDoc, QueryRequest, QueryResponse } from "./types";

export interface HistoryEntry {
  request: QueryRequest;
  response: QueryResponse;
}

export interface ViewState {
  history: HistoryEntry[];
  /** index into the displayed response's trace steps */
  selectedStep: number | null;
  /** node id within the currently displayed tree */
  selectedNode: string | null;
  /** when set, the memory view shows only this version branch */
  versionFilter: string | null;
}

export const initialState: ViewState = {
  history: [],
  selectedStep: null,
  selectedNode: null,
  versionFilter: null,
};

export function currentResponse(state: ViewState): QueryResponse | null {
  return state.history.length ? state.history[state.history.length - 1].response : null;
}

function traceLength(state: ViewState): number {
  const response = currentResponse(state);
  return response?.trace?.steps.length ?? 0;
}

/** Append a request/response pair; selections reset to the new response. */
export function appendHistory(state: ViewState, entry: HistoryEntry): ViewState {
  return { ...state, history: [...state.history, entry], selectedStep: null, selectedNode: null };
}

/** Select a trace step; out-of-range indices are refused, null deselects. */
export function selectStep(state: ViewState, index: number | null): ViewState {
  if (index !== null && (index < 0 || index >= traceLength(state))) {
    return state;
  }
  return { ...state, selectedStep: index };
}

/** Select a node; ids missing from the displayed tree are refused. */
export function selectNode(state: ViewState, nodeId: string | null, displayed: Set<string>): ViewState {
  if (nodeId !== null && !displayed.has(nodeId)) {
    return state;
  }
  return { ...state, selectedNode: nodeId };
}

export function setVersionFilter(state: ViewState, versionId: string | null): ViewState {
  return { ...state, versionFilter: versionId };
}

// -- tree geometry helpers (structure only; no scoring happens client-side) --

export function nodeIndex(doc: MemoryDocument): Map<string, NodeDoc> {
  const index = new Map<string, NodeDoc>();
  const walk = (node: NodeDoc) => {
    index.set(node.id, node);
    node.children.forEach(walk);
  };
  walk(doc.root);
  return index;
}

/** ids of node and every node below it, pre-order */
export function subtreeIds(node: NodeDoc): string[] {
  const out: string[] = [];
  const walk = (current: NodeDoc) => {
    out.push(current.id);
    current.children.forEach(walk);
  };
  walk(node);
  return out;
}

/** Convert a service byte offset (UTF-8) into a character index. */
export function byteOffsetToCharIndex(text: string, byteOffset: number): number {
  const encoder = new TextEncoder();
  let bytes = 0;
  let index = 0;
  for (const ch of text) {
    if (bytes >= byteOffset) break;
    bytes += encoder.encode(ch).length;
    index += ch.length;
  }
  return index;
}
