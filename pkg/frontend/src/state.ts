import type { ChatApiResponse, ChatTurn } from "./types.js";

export interface AppState {
  turns: ChatTurn[];
}

export function initialState(): AppState {
  return { turns: [] };
}

export function hasPendingTurn(state: AppState): boolean {
  return state.turns.some((t) => t.status === "pending");
}

// All transitions return a new state; turns stay in submission order.

export function beginTurn(state: AppState, query: string): AppState {
  if (!query.trim()) return state;
  if (hasPendingTurn(state)) return state;
  return { turns: [...state.turns, { query, status: "pending" }] };
}

export function completeTurn(state: AppState, resp: ChatApiResponse): AppState {
  return {
    turns: state.turns.map((t) =>
      t.status === "pending"
        ? {
            ...t,
            status: "done" as const,
            responseText: resp.text,
            lowConfidence: resp.low_confidence,
            debug: resp.debug,
          }
        : t,
    ),
  };
}

export function failTurn(state: AppState, message: string): AppState {
  return {
    turns: state.turns.map((t) =>
      t.status === "pending"
        ? { ...t, status: "error" as const, errorMessage: message }
        : t,
    ),
  };
}
