/** Wire types mirroring the chat service protocol. */

export interface EventFrame {
  seq: number;
  type: string;
  payload: Record<string, unknown>;
  ts: string;
}

export interface SearchResult {
  doc_id: string;
  name: string;
  url: string;
  score: number | null;
  snippet: string;
}

export interface ClarificationQuestion {
  text: string;
  suggested_answers: string[];
}

export interface DiagnosticSpan {
  start_line: number;
  start_column: number;
  end_line: number;
  end_column: number;
}

export interface Diagnostic {
  code: string;
  severity: "error" | "warning";
  span: DiagnosticSpan;
  raw_message: string;
  clarified_message: string;
  suggested_doc_ids: string[];
}

export interface ChunkUpdateResponse {
  chunk_id: string;
  revision: number;
  diagnostics: Diagnostic[];
}

export type DebugMode = "explain" | "auto-fix" | "fix-with-ideas";
