/**
 * Parser for the invsq CSV table format: '#'-prefixed metadata lines of
 * the form `# key = <json>`, then a header row, then data rows.
 */

import Papa from "papaparse";

export interface Table {
  meta: Record<string, unknown>;
  columns: string[];
  rows: string[][];
}

export class CsvFormatError extends Error {}

export function parseTable(text: string): Table {
  const meta: Record<string, unknown> = {};
  const bodyLines: string[] = [];
  for (const line of text.split(/\r?\n/)) {
    if (line.startsWith("#")) {
      const m = line.match(/^#\s*(.*?)\s*=\s*(.*)$/);
      if (!m) {
        throw new CsvFormatError(`malformed metadata line: ${line}`);
      }
      try {
        meta[m[1]] = JSON.parse(m[2]);
      } catch {
        throw new CsvFormatError(`metadata value is not JSON: ${line}`);
      }
    } else if (line.trim() !== "") {
      bodyLines.push(line);
    }
  }
  if (bodyLines.length === 0) {
    throw new CsvFormatError("no header row found");
  }
  const parsed = Papa.parse<string[]>(bodyLines.join("\n"), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new CsvFormatError(`csv body parse failed: ${parsed.errors[0].message}`);
  }
  const [columns, ...rows] = parsed.data;
  return { meta, columns, rows };
}

/** Column values as numbers; 'true'/'false' map to 1/0, 'nan' to NaN. */
export function numericColumn(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvFormatError(`column ${name} not present in table`);
  }
  return table.rows.map((r) => {
    const v = r[idx];
    if (v === "true") return 1;
    if (v === "false") return 0;
    return Number(v);
  });
}
