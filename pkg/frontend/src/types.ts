// Shapes returned by the engine's /v1 HTTP API.

export interface PoolEntry {
  post_ordinal: number;
  comment_index: number;
  text: string;
  popularity: number;
}

export interface ScoredEntry {
  ordinal: number;
  score: number;
}

export interface ChatDebug {
  retrieved: ScoredEntry[];
  matched: ScoredEntry[];
  pool: PoolEntry[];
  chosen: PoolEntry;
}

export interface ChatApiResponse {
  text: string;
  low_confidence: boolean;
  debug?: ChatDebug;
}

export interface HealthResponse {
  status: string;
  n_posts: number;
  pv_dim: number;
}

// One conversational turn as tracked by the client. The transcript is the
// whole UI state: it can be re-rendered from the turn list alone.
export interface ChatTurn {
  query: string;
  status: "pending" | "done" | "error";
  responseText?: string;
  lowConfidence?: boolean;
  debug?: ChatDebug;
  errorMessage?: string;
}
