/**
 * Validation of parsed tables against the column schema shipped with the
 * solver package (src/invsq/csv_schema.json).  A header mismatch is a
 * hard error: columns are never guessed.
 */

import { readFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import type { Table } from "./csv.js";

export type FigureKind = "rgflow" | "beta" | "spectrum" | "phase" | "xsec";

export const FIGURE_KINDS: FigureKind[] = ["rgflow", "beta", "spectrum", "phase", "xsec"];

interface ColumnSpec {
  name: string;
  type: string;
  description: string;
}

export interface CsvSchema {
  tables: Record<string, { columns: ColumnSpec[]; notes?: string }>;
}

export class SchemaError extends Error {}

const HERE = dirname(fileURLToPath(import.meta.url));
// dist/ and src/ both sit one level below the frontend package root,
// which itself sits next to the solver's src/ tree.
export const DEFAULT_SCHEMA_PATH = resolve(HERE, "../../src/invsq/csv_schema.json");

export function loadSchema(path: string = DEFAULT_SCHEMA_PATH): CsvSchema {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new SchemaError(`cannot read schema file ${path}: ${err}`);
  }
  const schema = JSON.parse(text) as CsvSchema;
  if (!schema.tables) {
    throw new SchemaError(`schema file ${path} has no 'tables' section`);
  }
  return schema;
}

export function validateTable(table: Table, kind: string, schema: CsvSchema): void {
  const spec = schema.tables[kind];
  if (!spec) {
    throw new SchemaError(`schema has no table kind '${kind}'`);
  }
  const expected = spec.columns.map((c) => c.name);
  const got = table.columns;
  if (expected.length !== got.length || expected.some((name, i) => name !== got[i])) {
    throw new SchemaError(
      `column mismatch for kind '${kind}': expected [${expected.join(", ")}], ` +
        `got [${got.join(", ")}]`,
    );
  }
}
