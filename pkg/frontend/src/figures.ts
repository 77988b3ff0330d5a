/**
 * Figure construction for the five table kinds the solver CLI emits.
 * Pure file-to-file rendering: the only quantity recomputed here is the
 * analytic unitarity-limit overlay 4*pi/k^2 on cross-section figures.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { numericColumn, parseTable, type Table } from "./csv.js";
import { loadSchema, validateTable, type CsvSchema, type FigureKind } from "./schema.js";
import { renderChart, type ChartSpec, type Series } from "./svg.js";

export interface FigureRecipe {
  kind: FigureKind;
  inputs: string[];
  output: string;
  schemaPath?: string;
}

const PALETTE = ["#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#b7950b", "#34495e"];

function groupBy(table: Table, column: string): Map<string, number[]> {
  const idx = table.columns.indexOf(column);
  const groups = new Map<string, number[]>();
  table.rows.forEach((row, i) => {
    const key = row[idx];
    const bucket = groups.get(key) ?? [];
    bucket.push(i);
    groups.set(key, bucket);
  });
  return groups;
}

const pick = (values: number[], idx: number[]) => idx.map((i) => values[i]);

function rgflowChart(tables: Table[]): ChartSpec {
  const series: Series[] = [];
  tables.forEach((t, i) => {
    const cutoff = numericColumn(t, "cutoff");
    const h = numericColumn(t, "h");
    const adjacent = numericColumn(t, "is_pole_adjacent");
    const near = adjacent.map((_, j) => j).filter((j) => adjacent[j] === 1);
    const lstar = (t.meta.config as { lambda_star?: number })?.lambda_star ?? i;
    // pole-adjacent rows become NaN breaks so the line never bridges a pole
    series.push({
      label: `lambda_star=${lstar}`,
      x: cutoff,
      y: h.map((v, j) => (adjacent[j] === 1 ? NaN : v)),
      kind: "line",
      color: PALETTE[i % PALETTE.length],
    });
    if (near.length > 0) {
      // excursions toward the coupling pole are marked, never interpolated
      series.push({
        label: `lambda_star=${lstar} pole-adjacent`,
        x: pick(cutoff, near),
        y: pick(h, near),
        kind: "points",
        color: PALETTE[i % PALETTE.length],
      });
    }
  });
  return {
    kind: "rgflow",
    title: "Running coupling over the cutoff cycle",
    xLabel: "cutoff",
    yLabel: "H",
    xScale: "log",
    yScale: "linear",
    series,
  };
}

function betaChart(tables: Table[]): ChartSpec {
  const series: Series[] = [];
  tables.forEach((t, i) => {
    const h = numericColumn(t, "h");
    const beta = numericColumn(t, "beta");
    const extremum = numericColumn(t, "is_extremum");
    const grid = extremum.map((e, j) => j).filter((j) => extremum[j] === 0);
    const peak = extremum.map((e, j) => j).filter((j) => extremum[j] === 1);
    const nu = (t.meta.config as { nu?: number })?.nu ?? i;
    series.push({
      label: `nu=${nu}`,
      x: pick(h, grid),
      y: pick(beta, grid),
      kind: "line",
      color: PALETTE[i % PALETTE.length],
    });
    if (peak.length > 0) {
      series.push({
        label: `nu=${nu} extremum`,
        x: pick(h, peak),
        y: pick(beta, peak),
        kind: "points",
        color: PALETTE[i % PALETTE.length],
      });
    }
  });
  return {
    kind: "beta",
    title: "Beta function of the running coupling",
    xLabel: "H",
    yLabel: "beta(H)",
    xScale: "linear",
    yScale: "linear",
    series,
  };
}

function spectrumChart(tables: Table[]): ChartSpec {
  const series: Series[] = [];
  let i = 0;
  for (const t of tables) {
    const cutoff = numericColumn(t, "cutoff");
    const b = numericColumn(t, "binding_energy");
    const renormalized = numericColumn(t, "renormalized");
    for (const [key, idx] of groupBy(t, "renormalized")) {
      void renormalized;
      series.push({
        label: key === "true" ? "renormalized" : "h=0",
        x: pick(cutoff, idx),
        y: pick(b, idx),
        // circles for the schedule-active tower, squares for the bare one
        kind: key === "true" ? "points" : "squares",
        color: PALETTE[i++ % PALETTE.length],
      });
    }
  }
  return {
    kind: "spectrum",
    title: "Bound-state tower vs cutoff",
    xLabel: "cutoff",
    yLabel: "binding energy",
    xScale: "log",
    yScale: "log",
    series,
  };
}

function phaseChart(tables: Table[]): ChartSpec {
  const series: Series[] = [];
  let i = 0;
  for (const t of tables) {
    const k = numericColumn(t, "k");
    const cot = numericColumn(t, "cot_delta");
    for (const [key, idx] of groupBy(t, "cutoff")) {
      series.push({
        label: `cutoff=${key}`,
        x: pick(k, idx),
        y: pick(cot, idx),
        kind: "line",
        color: PALETTE[i++ % PALETTE.length],
      });
    }
  }
  return {
    kind: "phase",
    title: "cot(delta) vs momentum",
    xLabel: "k",
    yLabel: "cot delta",
    xScale: "log",
    yScale: "linear",
    series,
  };
}

function xsecChart(tables: Table[]): ChartSpec {
  const series: Series[] = [];
  let i = 0;
  let kLo = Infinity;
  let kHi = 0;
  for (const t of tables) {
    const k = numericColumn(t, "k");
    const sigma = numericColumn(t, "sigma_tot");
    kLo = Math.min(kLo, ...k);
    kHi = Math.max(kHi, ...k);
    for (const [key, idx] of groupBy(t, "cutoff")) {
      series.push({
        label: `cutoff=${key}`,
        x: pick(k, idx),
        y: pick(sigma, idx),
        kind: "line",
        color: PALETTE[i++ % PALETTE.length],
      });
    }
  }
  // analytic unitarity limit 4*pi/k^2, recomputed at render time
  const n = 120;
  const ks = Array.from({ length: n }, (_, j) =>
    kLo * Math.pow(kHi / kLo, j / (n - 1)),
  );
  series.push({
    label: "unitarity limit 4*pi/k^2",
    x: ks,
    y: ks.map((k) => (4 * Math.PI) / (k * k)),
    kind: "line",
    color: "#555555",
    dashed: true,
  });
  return {
    kind: "xsec",
    title: "Total cross section vs momentum",
    xLabel: "k",
    yLabel: "sigma_tot",
    xScale: "log",
    yScale: "log",
    series,
  };
}

const BUILDERS: Record<FigureKind, (tables: Table[]) => ChartSpec> = {
  rgflow: rgflowChart,
  beta: betaChart,
  spectrum: spectrumChart,
  phase: phaseChart,
  xsec: xsecChart,
};

export function render(recipe: FigureRecipe): void {
  const schema: CsvSchema = loadSchema(recipe.schemaPath);
  const tables = recipe.inputs.map((path) => {
    const table = parseTable(readFileSync(path, "utf-8"));
    validateTable(table, recipe.kind, schema);
    return table;
  });
  const svg = renderChart(BUILDERS[recipe.kind](tables));
  writeFileSync(recipe.output, svg + "\n");
}
