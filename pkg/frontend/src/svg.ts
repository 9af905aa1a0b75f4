/**
 * Minimal hand-rolled SVG output: a grid of log-log panels, each holding
 * polyline+marker series, decade ticks, and a small legend.  No plotting
 * stack, no DOM; just strings.
 */

export interface Series {
  name: string;
  x: number[];
  y: number[];
  /** extra straight line in data coordinates, e.g. a least-squares fit */
  fit?: { x: number[]; y: number[]; label: string };
}

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const PANEL_W = 360;
const PANEL_H = 300;
const MARGIN = { left: 58, right: 14, top: 30, bottom: 42 };

function decades(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); Math.pow(10, e) <= hi * (1 + 1e-12); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

function fmtTick(v: number): string {
  const e = Math.round(Math.log10(v));
  if (e >= -3 && e <= 3) {
    return v.toPrecision(1).replace(/\.?0+e.*/, "");
  }
  return `1e${e}`;
}

class LogScale {
  private lo: number;
  private span: number;
  constructor(
    values: number[],
    private pixelLo: number,
    private pixelHi: number,
  ) {
    let min = Math.min(...values);
    let max = Math.max(...values);
    if (min === max) {
      min /= 2;
      max *= 2;
    }
    // pad by 5% of the log range on both sides
    const pad = 0.05 * (Math.log10(max) - Math.log10(min) || 1);
    this.lo = Math.log10(min) - pad;
    this.span = Math.log10(max) + pad - this.lo;
    this.dataLo = min;
    this.dataHi = max;
  }
  dataLo: number;
  dataHi: number;
  at(v: number): number {
    const t = (Math.log10(v) - this.lo) / this.span;
    return this.pixelLo + t * (this.pixelHi - this.pixelLo);
  }
}

function renderPanel(panel: Panel, x0: number, y0: number): string {
  const plotX0 = x0 + MARGIN.left;
  const plotX1 = x0 + PANEL_W - MARGIN.right;
  const plotY0 = y0 + MARGIN.top;
  const plotY1 = y0 + PANEL_H - MARGIN.bottom;

  const xs = panel.series.flatMap((s) => s.x.concat(s.fit ? s.fit.x : []));
  const ys = panel.series.flatMap((s) => s.y.concat(s.fit ? s.fit.y : []));
  const sx = new LogScale(xs, plotX0, plotX1);
  const sy = new LogScale(ys, plotY1, plotY0); // SVG y grows downward

  const parts: string[] = [];
  parts.push(
    `<rect x="${plotX0}" y="${plotY0}" width="${plotX1 - plotX0}" height="${plotY1 - plotY0}"` +
      ` fill="none" stroke="#444" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${x0 + PANEL_W / 2}" y="${y0 + 18}" text-anchor="middle" font-size="13"` +
      ` font-weight="bold">${panel.title}</text>`,
  );
  for (const tick of decades(sx.dataLo, sx.dataHi)) {
    const px = sx.at(tick);
    parts.push(`<line x1="${px}" y1="${plotY1}" x2="${px}" y2="${plotY1 + 4}" stroke="#444"/>`);
    parts.push(
      `<text x="${px}" y="${plotY1 + 16}" text-anchor="middle" font-size="10">${fmtTick(tick)}</text>`,
    );
  }
  for (const tick of decades(sy.dataLo, sy.dataHi)) {
    const py = sy.at(tick);
    parts.push(`<line x1="${plotX0 - 4}" y1="${py}" x2="${plotX0}" y2="${py}" stroke="#444"/>`);
    parts.push(
      `<text x="${plotX0 - 6}" y="${py + 3}" text-anchor="end" font-size="10">${fmtTick(tick)}</text>`,
    );
  }
  parts.push(
    `<text x="${x0 + PANEL_W / 2}" y="${y0 + PANEL_H - 8}" text-anchor="middle"` +
      ` font-size="11">${panel.xLabel}</text>`,
  );
  parts.push(
    `<text x="${x0 + 14}" y="${(plotY0 + plotY1) / 2}" text-anchor="middle" font-size="11"` +
      ` transform="rotate(-90 ${x0 + 14} ${(plotY0 + plotY1) / 2})">${panel.yLabel}</text>`,
  );

  panel.series.forEach((series, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const points = series.x.map((v, i) => `${sx.at(v)},${sy.at(series.y[i])}`);
    parts.push(
      `<polyline points="${points.join(" ")}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
    );
    for (const p of points) {
      const [px, py] = p.split(",");
      parts.push(`<circle cx="${px}" cy="${py}" r="2.8" fill="${color}"/>`);
    }
    if (series.fit) {
      const fitPts = series.fit.x.map((v, i) => `${sx.at(v)},${sy.at(series.fit!.y[i])}`);
      parts.push(
        `<polyline points="${fitPts.join(" ")}" fill="none" stroke="#000" stroke-width="1"` +
          ` stroke-dasharray="5,3"/>`,
      );
    }
    const legendY = plotY0 + 14 + 13 * idx;
    parts.push(
      `<line x1="${plotX0 + 8}" y1="${legendY - 3}" x2="${plotX0 + 26}" y2="${legendY - 3}"` +
        ` stroke="${color}" stroke-width="2"/>`,
    );
    const label = series.fit ? `${series.name} (${series.fit.label})` : series.name;
    parts.push(`<text x="${plotX0 + 30}" y="${legendY}" font-size="10">${label}</text>`);
  });
  return parts.join("\n");
}

export function renderFigure(panels: Panel[], columns: number): string {
  const cols = Math.min(columns, panels.length);
  const rowCount = Math.ceil(panels.length / cols);
  const width = cols * PANEL_W;
  const height = rowCount * PANEL_H;
  const body = panels
    .map((panel, i) => renderPanel(panel, (i % cols) * PANEL_W, Math.floor(i / cols) * PANEL_H))
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"` +
    ` viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n${body}\n</svg>\n`
  );
}
