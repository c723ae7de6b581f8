/** One-shot matrix file support (CSV, header cell "demo\query"). */

import { readFileSync } from "node:fs";

export const MATRIX_HEADER = "demo\\query";

export class OneShotMatrix {
  private readonly entries = new Map<string, number>();
  readonly demoIds: number[] = [];
  readonly queryIds: number[] = [];

  constructor(rows: string[][]) {
    const header = rows[0];
    if (!header || header[0] !== MATRIX_HEADER) {
      throw new Error(`first header cell must be '${MATRIX_HEADER}'`);
    }
    this.queryIds = header.slice(1).map((cell) => parseId(cell, "query id"));
    if (this.queryIds.length === 0) {
      throw new Error("matrix has no query columns");
    }
    for (const row of rows.slice(1)) {
      if (row.length === 1 && row[0] === "") continue;
      if (row.length !== this.queryIds.length + 1) {
        throw new Error(`expected ${this.queryIds.length + 1} cells, got ${row.length}`);
      }
      const demo = parseId(row[0]!, "demo id");
      this.demoIds.push(demo);
      row.slice(1).forEach((cell, j) => {
        const value = Number(cell);
        if (!Number.isFinite(value)) {
          throw new Error(`non-finite utility ${cell} for demo ${demo}`);
        }
        this.entries.set(`${demo}:${this.queryIds[j]}`, value);
      });
    }
    if (this.demoIds.length === 0) {
      throw new Error("matrix has no demo rows");
    }
  }

  value(demo: number, query: number): number {
    const value = this.entries.get(`${demo}:${query}`);
    if (value === undefined) {
      throw new Error(`no matrix entry for demo ${demo} and query ${query}`);
    }
    return value;
  }
}

function parseId(cell: string, what: string): number {
  const value = Number(cell);
  if (!Number.isInteger(value)) {
    throw new Error(`bad ${what}: ${cell}`);
  }
  return value;
}

export function loadMatrix(path: string): OneShotMatrix {
  const text = readFileSync(path, "utf-8");
  const rows = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0)
    .map((line) => line.split(","));
  return new OneShotMatrix(rows);
}
