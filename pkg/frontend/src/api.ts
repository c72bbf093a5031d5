import type { ChatApiResponse, HealthResponse } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export async function postChat(
  baseUrl: string,
  query: string,
  seed?: number,
): Promise<ChatApiResponse> {
  const body: Record<string, unknown> = { query, debug: true };
  if (seed !== undefined) body.seed = seed;
  const res = await fetch(`${baseUrl}/v1/chat`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!res.ok) {
    let detail = `server returned ${res.status}`;
    try {
      const err = await res.json();
      if (err && err.error) detail = `${err.error} (${res.status})`;
    } catch {
      // non-JSON error body; keep the status message
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as ChatApiResponse;
}

export async function getHealth(baseUrl: string): Promise<HealthResponse> {
  const res = await fetch(`${baseUrl}/v1/health`);
  if (!res.ok) throw new ApiError(res.status, `server returned ${res.status}`);
  return (await res.json()) as HealthResponse;
}
