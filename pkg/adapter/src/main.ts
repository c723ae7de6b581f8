#!/usr/bin/env node
/** CLI entry: `node dist/src/main.js --mode mock --matrix scores.csv`. */

import { MockMatrixScorer, serve } from "./adapter.js";
import { loadMatrix } from "./matrix.js";
import type { Orientation } from "./protocol.js";

interface Args {
  mode: string;
  matrix?: string;
  orientation: Orientation;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { mode: "mock", orientation: "higher_better" };
  for (let i = 0; i < argv.length; i += 1) {
    const flag = argv[i];
    switch (flag) {
      case "--mode":
        args.mode = argv[++i] ?? "";
        break;
      case "--matrix":
        args.matrix = argv[++i];
        break;
      case "--orientation": {
        const value = argv[++i];
        if (value !== "higher_better" && value !== "lower_better") {
          throw new Error(`--orientation must be higher_better or lower_better`);
        }
        args.orientation = value;
        break;
      }
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  return args;
}

async function main(): Promise<number> {
  let args: Args;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (err) {
    process.stderr.write(`evaluator-adapter: ${(err as Error).message}\n`);
    return 2;
  }
  if (args.mode === "hook") {
    process.stderr.write(
      "evaluator-adapter: hook mode has no scorer wired in. Implement the " +
        "Scorer interface in src/adapter.ts (this is the attachment point " +
        "for a real model) and serve it from your own entry script.\n",
    );
    return 2;
  }
  if (args.mode !== "mock") {
    process.stderr.write(`evaluator-adapter: unknown mode ${args.mode}\n`);
    return 2;
  }
  if (!args.matrix) {
    process.stderr.write("evaluator-adapter: mock mode requires --matrix\n");
    return 2;
  }
  let scorer: MockMatrixScorer;
  try {
    scorer = new MockMatrixScorer(loadMatrix(args.matrix));
  } catch (err) {
    process.stderr.write(`evaluator-adapter: ${(err as Error).message}\n`);
    return 2;
  }
  await serve({ scorer, orientation: args.orientation });
  return 0;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    process.stderr.write(`evaluator-adapter: fatal: ${err}\n`);
    process.exit(1);
  },
);
