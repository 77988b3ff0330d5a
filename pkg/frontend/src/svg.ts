/**
 * Minimal SVG chart assembly: a single plot area with two axes and any
 * number of point/line series.  Output is a standalone SVG string; the
 * structural attributes (data-kind, data-x-scale, data-series) exist so
 * golden tests can assert on figure structure instead of pixels.
 */

import { scaleLinear, scaleLog } from "d3-scale";

export type AxisScale = "linear" | "log";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  kind: "line" | "points" | "squares";
  color: string;
  dashed?: boolean;
}

export interface ChartSpec {
  kind: string;
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: AxisScale;
  yScale: AxisScale;
  series: Series[];
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 40, right: 24, bottom: 56, left: 72 };

function makeScale(scale: AxisScale, domain: [number, number], range: [number, number]) {
  if (scale === "log") {
    return scaleLog().domain(domain).range(range).nice();
  }
  return scaleLinear().domain(domain).range(range).nice();
}

function finitePairs(s: Series): Array<[number, number]> {
  const out: Array<[number, number]> = [];
  for (let i = 0; i < s.x.length; i++) {
    if (Number.isFinite(s.x[i]) && Number.isFinite(s.y[i])) {
      out.push([s.x[i], s.y[i]]);
    }
  }
  return out;
}

function extent(values: number[], scale: AxisScale): [number, number] {
  const usable = values.filter((v) => Number.isFinite(v) && (scale !== "log" || v > 0));
  if (usable.length === 0) {
    throw new Error("no plottable values for axis");
  }
  let lo = Math.min(...usable);
  let hi = Math.max(...usable);
  if (lo === hi) {
    lo = scale === "log" ? lo / 2 : lo - 1;
    hi = scale === "log" ? hi * 2 : hi + 1;
  }
  return [lo, hi];
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0).replace("e+", "e");
  }
  return `${Number(v.toPrecision(6))}`;
}

const esc = (s: string) => s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function renderChart(spec: ChartSpec): string {
  const plotW: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
  const plotH: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];
  const allX = spec.series.flatMap((s) => s.x);
  const allY = spec.series.flatMap((s) => s.y);
  const sx = makeScale(spec.xScale, extent(allX, spec.xScale), plotW);
  const sy = makeScale(spec.yScale, extent(allY, spec.yScale), plotH);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" data-kind="${esc(spec.kind)}" ` +
      `data-x-scale="${spec.xScale}" data-y-scale="${spec.yScale}" ` +
      `data-series="${spec.series.length}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="15" ` +
      `font-family="sans-serif">${esc(spec.title)}</text>`,
  );

  // axes with ticks
  const [x0, x1] = plotW;
  const [y0, y1] = plotH;
  const isPowerOfTen = (t: number) =>
    Math.abs(Math.log10(t) - Math.round(Math.log10(t))) < 1e-9;
  const xTicks = sx.ticks(spec.xScale === "log" ? 6 : 8).filter(
    (t: number) => spec.xScale !== "log" || isPowerOfTen(t),
  );
  const yTicks = sy.ticks(spec.yScale === "log" ? 6 : 8).filter(
    (t: number) => spec.yScale !== "log" || isPowerOfTen(t),
  );
  parts.push(`<g class="axis x-axis" data-scale="${spec.xScale}">`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  for (const t of xTicks) {
    const px = sx(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="11" ` +
        `font-family="sans-serif">${fmtTick(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13" ` +
      `font-family="sans-serif">${esc(spec.xLabel)}</text>`,
  );
  parts.push("</g>");
  parts.push(`<g class="axis y-axis" data-scale="${spec.yScale}">`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  for (const t of yTicks) {
    const py = sy(t);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11" ` +
        `font-family="sans-serif">${fmtTick(t)}</text>`,
    );
  }
  parts.push(
    `<text transform="rotate(-90)" x="${-(y0 + y1) / 2}" y="18" text-anchor="middle" ` +
      `font-size="13" font-family="sans-serif">${esc(spec.yLabel)}</text>`,
  );
  parts.push("</g>");

  for (const s of spec.series) {
    const usable = ([px, py]: [number, number]) =>
      Number.isFinite(px) &&
      Number.isFinite(py) &&
      (spec.xScale !== "log" || px > 0) &&
      (spec.yScale !== "log" || py > 0);
    const pts = finitePairs(s).filter(usable);
    const mapped = pts.map(([px, py]) => [sx(px), sy(py)] as [number, number]);
    const dash = s.dashed ? ` stroke-dasharray="6 4"` : "";
    parts.push(`<g class="series" data-label="${esc(s.label)}" data-points="${pts.length}">`);
    if (s.kind === "line") {
      // non-finite input points act as path breaks (e.g. pole gaps)
      const cmds: string[] = [];
      let pen = false;
      for (let j = 0; j < s.x.length; j++) {
        const pt: [number, number] = [s.x[j], s.y[j]];
        if (!usable(pt)) {
          pen = false;
          continue;
        }
        cmds.push(`${pen ? "L" : "M"}${sx(pt[0]).toFixed(2)},${sy(pt[1]).toFixed(2)}`);
        pen = true;
      }
      parts.push(
        `<path d="${cmds.join(" ")}" fill="none" stroke="${s.color}"${dash} stroke-width="1.5"/>`,
      );
    } else if (s.kind === "points") {
      for (const [px, py] of mapped) {
        parts.push(
          `<circle cx="${px.toFixed(2)}" cy="${py.toFixed(2)}" r="3.5" fill="none" ` +
            `stroke="${s.color}" stroke-width="1.3"/>`,
        );
      }
    } else {
      for (const [px, py] of mapped) {
        parts.push(
          `<rect x="${(px - 3).toFixed(2)}" y="${(py - 3).toFixed(2)}" width="6" height="6" ` +
            `fill="none" stroke="${s.color}" stroke-width="1.3"/>`,
        );
      }
    }
    parts.push("</g>");
  }

  parts.push("</svg>");
  return parts.join("\n");
}
