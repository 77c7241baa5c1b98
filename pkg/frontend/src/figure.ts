import { extent } from "d3-array";
import { scaleLinear } from "d3-scale";
import { area, line } from "d3-shape";

import { SchemaError, type SweepRecord } from "./schema.js";
import { summarize, type GroupSummary, type SummaryPoint } from "./summarize.js";

export type FigureKind = "nmse" | "power" | "position";

export interface FigureSpec {
  kind: FigureKind;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  width?: number;
  height?: number;
}

/** sweep_name value the harness writes for each figure. */
export const SWEEP_NAME: Record<FigureKind, string> = {
  nmse: "nmse",
  power: "power",
  position: "irs_position",
};

const DEFAULT_LABELS: Record<FigureKind, { title: string; x: string }> = {
  nmse: { title: "WSR vs channel-estimation NMSE", x: "NMSE" },
  power: { title: "WSR vs transmit power", x: "transmit power (dBm)" },
  position: { title: "WSR vs IRS position", x: "IRS x-coordinate (m)" },
};

const COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const MARGIN = { top: 40, right: 150, bottom: 45, left: 55 };

function groupLabel(g: GroupSummary): string {
  return g.bits > 0 ? `${g.method} (${g.bits}-bit)` : `${g.method} (continuous)`;
}

function fmt(v: number): string {
  return Number(v.toFixed(3)).toString();
}

/**
 * Build the SVG for one sweep figure: per-(method, bits) mean curve with a
 * 95% CI band. Pure function of the records — identical input, identical
 * output. Groups without data points are skipped via `warn`.
 */
export function buildFigureSvg(
  records: SweepRecord[],
  spec: FigureSpec,
  warn: (message: string) => void = () => {},
): string {
  const sweepName = SWEEP_NAME[spec.kind];
  const relevant = records.filter((r) => r.sweepName === sweepName);
  if (relevant.length === 0) {
    throw new SchemaError(`CSV has no rows with sweep_name=${sweepName}`);
  }
  const groups = summarize(relevant).filter((g) => {
    if (g.points.length === 0) {
      warn(`skipping empty group ${groupLabel(g)}`);
      return false;
    }
    return true;
  });

  const width = spec.width ?? 640;
  const height = spec.height ?? 420;
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;

  const allPoints = groups.flatMap((g) => g.points);
  const [x0, x1] = extent(allPoints, (p) => p.sweepValue) as [number, number];
  const yLo = Math.min(...allPoints.map((p) => p.meanWsr - p.ci95));
  const yHi = Math.max(...allPoints.map((p) => p.meanWsr + p.ci95));
  const pad = 0.05 * (yHi - yLo || 1);

  const x = scaleLinear().domain([x0, x1]).range([0, innerW]);
  const y = scaleLinear().domain([yLo - pad, yHi + pad]).range([innerH, 0]);

  const meanLine = line<SummaryPoint>()
    .x((p) => x(p.sweepValue))
    .y((p) => y(p.meanWsr));
  const ciBand = area<SummaryPoint>()
    .x((p) => x(p.sweepValue))
    .y0((p) => y(p.meanWsr - p.ci95))
    .y1((p) => y(p.meanWsr + p.ci95));

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<g transform="translate(${MARGIN.left},${MARGIN.top})">`);

  // axes with tick labels
  const labels = DEFAULT_LABELS[spec.kind];
  parts.push(`<line x1="0" y1="${innerH}" x2="${innerW}" y2="${innerH}" stroke="black"/>`);
  parts.push(`<line x1="0" y1="0" x2="0" y2="${innerH}" stroke="black"/>`);
  for (const t of x.ticks(6)) {
    const px = x(t);
    parts.push(`<line x1="${px}" y1="${innerH}" x2="${px}" y2="${innerH + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${px}" y="${innerH + 18}" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of y.ticks(6)) {
    const py = y(t);
    parts.push(`<line x1="-5" y1="${py}" x2="0" y2="${py}" stroke="black"/>`);
    parts.push(`<text x="-8" y="${py + 4}" text-anchor="end">${fmt(t)}</text>`);
  }
  parts.push(
    `<text x="${innerW / 2}" y="${innerH + 38}" text-anchor="middle">` +
      `${spec.xLabel ?? labels.x}</text>`,
  );
  parts.push(
    `<text transform="translate(${-40},${innerH / 2}) rotate(-90)" ` +
      `text-anchor="middle">${spec.yLabel ?? "weighted sum rate (bps/Hz)"}</text>`,
  );
  parts.push(
    `<text x="${innerW / 2}" y="-18" text-anchor="middle" font-size="14">` +
      `${spec.title ?? labels.title}</text>`,
  );

  // one CI band + mean curve per (method, bits) group
  groups.forEach((g, i) => {
    const color = COLORS[i % COLORS.length];
    parts.push(
      `<path class="ci-band" d="${ciBand(g.points) ?? ""}" fill="${color}" ` +
        `fill-opacity="0.15" stroke="none"/>`,
    );
    parts.push(
      `<path class="mean-line" data-group="${g.method}/${g.bits}" ` +
        `d="${meanLine(g.points) ?? ""}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
    );
    for (const p of g.points) {
      parts.push(
        `<circle cx="${x(p.sweepValue)}" cy="${y(p.meanWsr)}" r="2.5" fill="${color}"/>`,
      );
    }
    const ly = 10 + i * 18;
    parts.push(
      `<line x1="${innerW + 10}" y1="${ly}" x2="${innerW + 30}" y2="${ly}" ` +
        `stroke="${color}" stroke-width="1.5"/>`,
    );
    parts.push(`<text x="${innerW + 35}" y="${ly + 4}">${groupLabel(g)}</text>`);
  });

  parts.push("</g></svg>");
  return parts.join("\n");
}
