/** Newline-delimited JSON evaluator protocol (version 1). */

export const PROTOCOL_VERSION = 1;

export type Orientation = "higher_better" | "lower_better";

export interface HelloMessage {
  type: "hello";
  version: number;
  orientation: Orientation;
}

export interface ResultMessage {
  type: "result";
  id: number;
  score: number;
}

export interface ErrorMessage {
  type: "error";
  id: number;
  message: string;
}

export type OutboundMessage = HelloMessage | ResultMessage | ErrorMessage;

export interface EvaluateRequest {
  id: number;
  demos: number[];
  query: number;
}

/** Parse and validate an evaluate request; returns an error string on failure. */
export function parseEvaluate(msg: Record<string, unknown>): EvaluateRequest | string {
  const id = msg["id"];
  if (typeof id !== "number" || !Number.isInteger(id) || id < 0) {
    return "request id must be a non-negative integer";
  }
  const demos = msg["demos"];
  if (
    !Array.isArray(demos) ||
    demos.length === 0 ||
    !demos.every((d) => typeof d === "number" && Number.isInteger(d))
  ) {
    return "demos must be a non-empty array of integer ids";
  }
  const query = msg["query"];
  if (typeof query !== "number" || !Number.isInteger(query)) {
    return "query must be an integer id";
  }
  return { id, demos: demos as number[], query };
}
