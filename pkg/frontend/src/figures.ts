import { ResultRow } from "./csv";
import { ChartSpec, Curve, renderChart } from "./svg";

export type FigureVariant = "fig1" | "fig1-inset" | "fig2";

const D_COLORS: Record<number, string> = {
  2: "#1f77b4",
  3: "#d62728",
  4: "#2ca02c",
};

const FALLBACK_COLORS = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

function colorForD(d: number, index: number): string {
  return D_COLORS[d] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

function byG(a: ResultRow, b: ResultRow): number {
  return a.g - b.g;
}

export class SelectionError extends Error {}

/** Q1 vs g, one curve per (protocol, d); QB dashed, CTAP solid. */
export function fig1Spec(rows: ResultRow[]): ChartSpec {
  const dValues = [...new Set(rows.map((r) => r.d))].sort((a, b) => a - b);
  const curves: Curve[] = [];
  for (const protocol of ["qb", "ctap"] as const) {
    dValues.forEach((d, i) => {
      const pts = rows
        .filter((r) => r.protocol === protocol && r.d === d)
        .sort(byG)
        .map((r): [number, number] => [r.g, r.q1]);
      if (pts.length === 0) return;
      curves.push({
        label: `${protocol.toUpperCase()} d=${d}`,
        color: colorForD(d, i),
        dashed: protocol === "qb",
        points: pts,
      });
    });
  }
  if (curves.length === 0) throw new SelectionError("no rows selected for fig1");
  return {
    title: "Q1 vs g",
    xLabel: "g / ωc",
    yLabel: "Q1",
    xScale: "linear",
    yScale: "linear",
    curves,
  };
}

/** Q1 vs d for CTAP at a single coupling g (d-saturation inset). */
export function fig1InsetSpec(rows: ResultRow[], g: number): ChartSpec {
  const tol = 1e-9;
  const pts = rows
    .filter((r) => r.protocol === "ctap" && Math.abs(r.g - g) < tol)
    .sort((a, b) => a.d - b.d)
    .map((r): [number, number] => [r.d, r.q1]);
  if (pts.length === 0) {
    throw new SelectionError(`no CTAP rows at g = ${g} for fig1-inset`);
  }
  return {
    title: `CTAP Q1 vs d at g = ${g}`,
    xLabel: "d",
    yLabel: "Q1",
    xScale: "linear",
    yScale: "linear",
    curves: [
      { label: `CTAP g=${g}`, color: "#1f77b4", dashed: false, points: pts },
    ],
  };
}

/** Leakage vs g on a log y-axis: leak_target solid, leak_pair dashed, per protocol. */
export function fig2Spec(rows: ResultRow[]): ChartSpec {
  const curves: Curve[] = [];
  const protoColors: Record<string, string> = { qb: "#d62728", ctap: "#1f77b4" };
  for (const protocol of ["qb", "ctap"] as const) {
    const selected = rows.filter((r) => r.protocol === protocol).sort(byG);
    if (selected.length === 0) continue;
    curves.push({
      label: `${protocol.toUpperCase()} target`,
      color: protoColors[protocol],
      dashed: false,
      points: selected.map((r): [number, number] => [r.g, r.leak_target]),
    });
    curves.push({
      label: `${protocol.toUpperCase()} pair`,
      color: protoColors[protocol],
      dashed: true,
      points: selected.map((r): [number, number] => [r.g, r.leak_pair]),
    });
  }
  if (curves.length === 0) throw new SelectionError("no rows selected for fig2");
  return {
    title: "Leakage vs g",
    xLabel: "g / ωc",
    yLabel: "leakage",
    xScale: "linear",
    yScale: "log",
    curves,
  };
}

export function renderFigure(
  variant: FigureVariant,
  rows: ResultRow[],
  options: { g?: number } = {},
): string {
  switch (variant) {
    case "fig1":
      return renderChart(fig1Spec(rows));
    case "fig1-inset":
      return renderChart(fig1InsetSpec(rows, options.g ?? 0.6));
    case "fig2":
      return renderChart(fig2Spec(rows));
  }
}
