// Wire shapes of the memory service. The workbench never computes a
// score itself; every number shown on screen comes from these bodies.

export interface NodeDoc {
  id: string;
  type: string;
  attributes: Record<string, string>;
  children: NodeDoc[];
}

export interface SchemaDoc {
  nodeTypes: string[];
  allowedChildren: Record<string, string[]>;
  allowedAttributes: Record<string, string[]>;
}

export interface MemoryDocument {
  schema: SchemaDoc;
  root: NodeDoc;
}

export interface VersionInfo {
  id: string;
  summary: string | null;
}

export interface ScorerChoice {
  kind: "lexical" | "embedding" | "entailment";
  endpoint?: string;
  model?: string;
}

export interface QueryRequest {
  query: string;
  scorer: ScorerChoice;
  topK: number;
  includeTrace: boolean;
}

export interface QueryResult {
  id: string;
  weight: number;
  path: string[];
}

export interface TraceStep {
  index: number;
  step: string;
  input: [string, number][];
  output: [string, number][];
  relevance: [string, string, number][];
}

export interface QueryResponse {
  query: string;
  results: QueryResult[];
  topId: string | null;
  topSubtree: { text: string; tokenCount: number } | null;
  contextTokenCount: number;
  trace?: { steps: TraceStep[] };
}

export interface ServiceError {
  error: string;
  message: string;
  offset?: number;
  expected?: string[];
}

export interface MutateRequest {
  spec: Record<string, unknown>;
  summary: string;
}

export interface MutateResponse {
  versionId: string;
  revision: number;
}
