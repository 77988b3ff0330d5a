/**
 * Golden structural checks on the rendered SVGs: axes, scale kinds,
 * series counts, and overlays — not pixel equality.
 */

import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { beforeAll, describe, expect, it } from "vitest";

import { render } from "../src/figures.js";
import { FIGURE_KINDS, type FigureKind } from "../src/schema.js";

const fixturePath = (name: string) => resolve(__dirname, "fixtures", name);

let outDir: string;
const svgs: Record<string, string> = {};

beforeAll(() => {
  outDir = mkdtempSync(join(tmpdir(), "invsq-fig-"));
  for (const kind of FIGURE_KINDS) {
    const out = join(outDir, `${kind}.svg`);
    render({ kind, inputs: [fixturePath(`${kind}.csv`)], output: out });
    svgs[kind] = readFileSync(out, "utf-8");
  }
});

const count = (text: string, needle: string) => text.split(needle).length - 1;

describe("figure structure", () => {
  it("renders all five kinds without error", () => {
    for (const kind of FIGURE_KINDS) {
      expect(svgs[kind]).toContain("<svg");
      expect(svgs[kind]).toContain(`data-kind="${kind}"`);
    }
  });

  it("every figure has exactly one x and one y axis with ticks", () => {
    for (const kind of FIGURE_KINDS) {
      expect(count(svgs[kind], 'class="axis x-axis"')).toBe(1);
      expect(count(svgs[kind], 'class="axis y-axis"')).toBe(1);
      expect(count(svgs[kind], "<text")).toBeGreaterThan(4);
    }
  });

  it("phase and xsec use a log momentum axis", () => {
    expect(svgs.phase).toContain('data-x-scale="log"');
    expect(svgs.xsec).toContain('data-x-scale="log"');
  });

  it("spectrum uses log-scaled energies", () => {
    expect(svgs.spectrum).toContain('data-y-scale="log"');
  });

  it("beta is linear-linear with an extremum marker", () => {
    expect(svgs.beta).toContain('data-x-scale="linear"');
    expect(svgs.beta).toContain('data-y-scale="linear"');
    expect(svgs.beta).toContain("extremum");
    expect(count(svgs.beta, "<circle")).toBeGreaterThanOrEqual(1);
  });

  it("xsec always overlays the dashed analytic unitarity curve", () => {
    expect(svgs.xsec).toContain("unitarity limit 4*pi/k^2");
    expect(count(svgs.xsec, "stroke-dasharray")).toBe(1);
  });

  it("spectrum separates renormalized circles from bare squares", () => {
    expect(svgs.spectrum).toContain('data-label="renormalized"');
    expect(svgs.spectrum).toContain('data-label="h=0"');
    expect(count(svgs.spectrum, "<circle")).toBeGreaterThanOrEqual(3);
    expect(count(svgs.spectrum, '<rect x="')).toBeGreaterThanOrEqual(3);
  });

  it("phase emits one series per cutoff in the sweep", () => {
    // the fixture sweeps two cutoffs
    expect(svgs.phase).toContain('data-series="2"');
  });

  it("series counts match the data, not hard-coded expectations", () => {
    for (const kind of FIGURE_KINDS) {
      const m = svgs[kind].match(/data-series="(\d+)"/);
      expect(m).not.toBeNull();
      expect(count(svgs[kind], 'class="series"')).toBe(Number(m![1]));
    }
  });

  it("multi-input overlays accumulate series", () => {
    const out = join(outDir, "beta-overlay.svg");
    render({
      kind: "beta" as FigureKind,
      inputs: [fixturePath("beta.csv"), fixturePath("beta.csv")],
      output: out,
    });
    const svg = readFileSync(out, "utf-8");
    expect(count(svg, 'class="series"')).toBe(4); // 2 curves + 2 extremum markers
  });
});
