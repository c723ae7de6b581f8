/** Protocol loop: handshake, evaluate requests, clean shutdown.
 *
 * A Scorer maps (demos, query) to a raw score.  Mock mode aggregates
 * one-shot matrix entries by their sequential mean in request order, which
 * is sufficient for protocol conformance and makes no claim about real
 * model behavior.  A real vision foundation model attaches here by
 * implementing Scorer (load the model once, run fused-prompt inference per
 * request) and serving it in place of the mock.
 */

import { createInterface } from "node:readline";
import type { Readable, Writable } from "node:stream";

import { OneShotMatrix } from "./matrix.js";
import {
  type Orientation,
  type OutboundMessage,
  PROTOCOL_VERSION,
  parseEvaluate,
} from "./protocol.js";

export interface Scorer {
  /** Raw higher-is-better score of a demo set on one query. */
  score(demos: number[], query: number): number;
}

export class MockMatrixScorer implements Scorer {
  constructor(private readonly matrix: OneShotMatrix) {}

  score(demos: number[], query: number): number {
    let total = 0.0;
    for (const demo of demos) {
      total += this.matrix.value(demo, query);
    }
    return total / demos.length;
  }
}

export interface AdapterOptions {
  scorer: Scorer;
  orientation?: Orientation;
  input?: Readable;
  output?: Writable;
}

export async function serve(options: AdapterOptions): Promise<void> {
  const orientation = options.orientation ?? "higher_better";
  const input = options.input ?? process.stdin;
  const output = options.output ?? process.stdout;

  const emit = (msg: OutboundMessage) => {
    output.write(JSON.stringify(msg) + "\n");
  };

  emit({ type: "hello", version: PROTOCOL_VERSION, orientation });

  const lines = createInterface({ input });
  for await (const line of lines) {
    if (line.trim() === "") continue;
    let msg: unknown;
    try {
      msg = JSON.parse(line);
    } catch {
      emit({ type: "error", id: 0, message: "malformed JSON line" });
      continue;
    }
    if (typeof msg !== "object" || msg === null) {
      emit({ type: "error", id: 0, message: "request must be a JSON object" });
      continue;
    }
    const record = msg as Record<string, unknown>;
    if (record["type"] === "shutdown") {
      lines.close();
      return;
    }
    if (record["type"] !== "evaluate") {
      const id = typeof record["id"] === "number" ? (record["id"] as number) : 0;
      emit({ type: "error", id, message: `unknown request type ${String(record["type"])}` });
      continue;
    }
    const request = parseEvaluate(record);
    if (typeof request === "string") {
      const id = typeof record["id"] === "number" ? (record["id"] as number) : 0;
      emit({ type: "error", id, message: request });
      continue;
    }
    try {
      const raw = options.scorer.score(request.demos, request.query);
      const score = orientation === "lower_better" ? -raw : raw;
      emit({ type: "result", id: request.id, score });
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      emit({ type: "error", id: request.id, message });
    }
  }
}
