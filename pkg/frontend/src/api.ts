// Service access. The page is served by `redukt serve --ui`, so relative
// paths hit the same origin; REDUKT_API can override for development.

import type { ServiceError, StructureDoc, ValidationRequest, VerdictDoc } from "./types.js";

const BASE = (window as unknown as { REDUKT_API?: string }).REDUKT_API ?? "";

export class ApiError extends Error {
  constructor(
    message: string,
    public status: number,
    public body: ServiceError | null,
  ) {
    super(message);
  }
}

async function post<T>(path: string, body: unknown): Promise<T> {
  const response = await fetch(`${BASE}${path}`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  const text = await response.text();
  let parsed: unknown = null;
  try {
    parsed = JSON.parse(text);
  } catch {
    parsed = null;
  }
  if (!response.ok) {
    const err = (parsed ?? { error: text }) as ServiceError;
    throw new ApiError(err.error ?? `HTTP ${response.status}`, response.status, err);
  }
  return parsed as T;
}

export function submitValidation(request: ValidationRequest): Promise<VerdictDoc> {
  return post<VerdictDoc>("/api/validate", request);
}

export function applyCandidate(
  gadget: ValidationRequest["gadget"],
  structure: StructureDoc,
): Promise<StructureDoc> {
  return post<StructureDoc>("/api/apply", { gadget, structure });
}

export async function listProblems(): Promise<unknown> {
  const response = await fetch(`${BASE}/api/problems`);
  return response.json();
}
