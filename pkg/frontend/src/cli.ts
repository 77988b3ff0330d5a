#!/usr/bin/env node
/**
 * invsq-fig <kind> --in table.csv [--in more.csv] --out figure.svg
 *                  [--schema path/to/csv_schema.json]
 *
 * Renders one static SVG figure from solver CSV tables.  Exit codes:
 * 0 success, 1 bad invocation or schema/format mismatch, 2 i/o failure.
 */

import { parseArgs } from "node:util";

import { CsvFormatError } from "./csv.js";
import { render } from "./figures.js";
import { FIGURE_KINDS, SchemaError, type FigureKind } from "./schema.js";

function usage(): string {
  return (
    `usage: invsq-fig <${FIGURE_KINDS.join("|")}> --in FILE [--in FILE ...] ` +
    `--out FILE [--schema FILE]`
  );
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
        schema: { type: "string" },
      },
    });
  } catch (err) {
    console.error(`invsq-fig: ${err instanceof Error ? err.message : err}`);
    console.error(usage());
    return 1;
  }
  const kind = parsed.positionals[0];
  const inputs = parsed.values.in ?? [];
  const output = parsed.values.out;
  if (!kind || !FIGURE_KINDS.includes(kind as FigureKind) || inputs.length === 0 || !output) {
    console.error(usage());
    return 1;
  }
  try {
    render({
      kind: kind as FigureKind,
      inputs,
      output,
      schemaPath: parsed.values.schema,
    });
  } catch (err) {
    if (err instanceof SchemaError || err instanceof CsvFormatError) {
      console.error(`invsq-fig: ${err.message}`);
      return 1;
    }
    console.error(`invsq-fig: i/o failure: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
  return 0;
}

process.exitCode = main(process.argv.slice(2));
