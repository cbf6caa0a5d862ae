/** Minimal numeric CSV reader for the solver's output files. */

import { readFileSync } from "node:fs";

export interface Table {
  header: string[];
  rows: number[][];
}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV document");
  }
  const header = lines[0]!.split(",").map((h) => h.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i]!.split(",");
    if (parts.length !== header.length) {
      throw new Error(
        `row ${i + 1}: expected ${header.length} fields, got ${parts.length}`,
      );
    }
    rows.push(
      parts.map((p, k) => {
        const trimmed = p.trim();
        // sweep files carry boolean flag columns; map them for uniformity
        if (trimmed === "true") return 1;
        if (trimmed === "false") return 0;
        const v = Number(trimmed);
        if (!Number.isFinite(v)) {
          throw new Error(`row ${i + 1}: non-numeric value ${p} in column ${header[k]}`);
        }
        return v;
      }),
    );
  }
  return { header, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

export function columnIndex(table: Table, name: string): number {
  const k = table.header.indexOf(name);
  if (k < 0) {
    throw new Error(`missing column: ${name}`);
  }
  return k;
}

export function column(table: Table, name: string): number[] {
  const k = columnIndex(table, name);
  return table.rows.map((r) => r[k]!);
}

/** All columns whose name starts with the prefix, in header order. */
export function columnsWithPrefix(table: Table, prefix: string): { name: string; values: number[] }[] {
  const out: { name: string; values: number[] }[] = [];
  table.header.forEach((name, k) => {
    if (name.startsWith(prefix)) {
      out.push({ name, values: table.rows.map((r) => r[k]!) });
    }
  });
  return out;
}
