export type ScaleKind = "linear" | "log";

export interface Scale {
  kind: ScaleKind;
  domain: [number, number];
  range: [number, number];
}

export function project(scale: Scale, value: number): number {
  const [d0, d1] = scale.domain;
  const [r0, r1] = scale.range;
  let t: number;
  if (scale.kind === "log") {
    t = (Math.log10(value) - Math.log10(d0)) / (Math.log10(d1) - Math.log10(d0));
  } else {
    t = (value - d0) / (d1 - d0);
  }
  return r0 + t * (r1 - r0);
}

export interface Curve {
  label: string;
  color: string;
  dashed: boolean;
  points: Array<[number, number]>;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: ScaleKind;
  yScale: ScaleKind;
  curves: Curve[];
  width?: number;
  height?: number;
}

const MARGIN = { top: 36, right: 24, bottom: 48, left: 64 };

function fmt(x: number): string {
  // Fixed precision keeps output byte-identical across runs.
  return x.toFixed(3).replace(/\.?0+$/, "") || "0";
}

function niceTicks(lo: number, hi: number, kind: ScaleKind): number[] {
  if (kind === "log") {
    const ticks: number[] = [];
    const e0 = Math.floor(Math.log10(lo));
    const e1 = Math.ceil(Math.log10(hi));
    for (let e = e0; e <= e1; e++) {
      const v = Math.pow(10, e);
      if (v >= lo * 0.999 && v <= hi * 1.001) ticks.push(v);
    }
    return ticks.length >= 2 ? ticks : [lo, hi];
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
  const mult = span / step > 8 ? 2 : 1;
  const ticks: number[] = [];
  const s = step * mult;
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12; v += s) {
    ticks.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return ticks;
}

function tickLabel(v: number, kind: ScaleKind): string {
  if (kind === "log") {
    const e = Math.round(Math.log10(v));
    return `1e${e}`;
  }
  return parseFloat(v.toPrecision(6)).toString();
}

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 640;
  const height = spec.height ?? 440;
  const plotX: [number, number] = [MARGIN.left, width - MARGIN.right];
  const plotY: [number, number] = [height - MARGIN.bottom, MARGIN.top];

  const xs: number[] = [];
  const ys: number[] = [];
  for (const c of spec.curves) {
    for (const [x, y] of c.points) {
      if (Number.isFinite(x)) xs.push(x);
      if (Number.isFinite(y) && (spec.yScale !== "log" || y > 0)) ys.push(y);
    }
  }
  if (xs.length === 0 || ys.length === 0) {
    throw new Error("no finite data points to plot");
  }
  let xLo = Math.min(...xs), xHi = Math.max(...xs);
  let yLo = Math.min(...ys), yHi = Math.max(...ys);
  if (xLo === xHi) { xLo -= 0.5; xHi += 0.5; }
  if (yLo === yHi) {
    if (spec.yScale === "log") { yLo /= 10; yHi *= 10; }
    else { yLo -= 0.5; yHi += 0.5; }
  } else if (spec.yScale === "linear") {
    const pad = 0.05 * (yHi - yLo);
    yLo -= pad; yHi += pad;
  }

  const xScale: Scale = { kind: spec.xScale, domain: [xLo, xHi], range: plotX };
  const yScale: Scale = { kind: spec.yScale, domain: [yLo, yHi], range: plotY };

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${width / 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="15">${spec.title}</text>`);

  // axes
  parts.push(`<line x1="${plotX[0]}" y1="${plotY[0]}" x2="${plotX[1]}" y2="${plotY[0]}" stroke="black"/>`);
  parts.push(`<line x1="${plotX[0]}" y1="${plotY[0]}" x2="${plotX[0]}" y2="${plotY[1]}" stroke="black"/>`);

  for (const v of niceTicks(xLo, xHi, spec.xScale)) {
    const px = project(xScale, v);
    parts.push(`<line x1="${fmt(px)}" y1="${plotY[0]}" x2="${fmt(px)}" y2="${plotY[0] + 5}" stroke="black"/>`);
    parts.push(`<text x="${fmt(px)}" y="${plotY[0] + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">${tickLabel(v, spec.xScale)}</text>`);
  }
  for (const v of niceTicks(yLo, yHi, spec.yScale)) {
    const py = project(yScale, v);
    parts.push(`<line x1="${plotX[0] - 5}" y1="${fmt(py)}" x2="${plotX[0]}" y2="${fmt(py)}" stroke="black"/>`);
    parts.push(`<text x="${plotX[0] - 8}" y="${fmt(py + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">${tickLabel(v, spec.yScale)}</text>`);
  }
  parts.push(`<text x="${(plotX[0] + plotX[1]) / 2}" y="${height - 10}" text-anchor="middle" font-family="sans-serif" font-size="13">${spec.xLabel}</text>`);
  parts.push(`<text x="16" y="${(plotY[0] + plotY[1]) / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 ${(plotY[0] + plotY[1]) / 2})">${spec.yLabel}</text>`);

  for (const curve of spec.curves) {
    const pts = curve.points.filter(([x, y]) =>
      Number.isFinite(x) && Number.isFinite(y) && (spec.yScale !== "log" || y > 0));
    if (pts.length === 0) continue;
    const d = pts
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(project(xScale, x))},${fmt(project(yScale, y))}`)
      .join(" ");
    const dash = curve.dashed ? ` stroke-dasharray="6,4"` : "";
    parts.push(`<path d="${d}" fill="none" stroke="${curve.color}" stroke-width="1.8"${dash} data-label="${curve.label}"/>`);
  }

  // legend
  let ly = MARGIN.top + 8;
  for (const curve of spec.curves) {
    const lx = plotX[1] - 150;
    const dash = curve.dashed ? ` stroke-dasharray="6,4"` : "";
    parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 28}" y2="${ly}" stroke="${curve.color}" stroke-width="1.8"${dash}/>`);
    parts.push(`<text x="${lx + 34}" y="${ly + 4}" font-family="sans-serif" font-size="11">${curve.label}</text>`);
    ly += 16;
  }

  parts.push(`</svg>`);
  return parts.join("\n") + "\n";
}
