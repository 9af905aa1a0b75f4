/**
 * Figure builder for the error-vs-h study: one panel per problem, three
 * error series per panel (l1, linf, ks) on log-log axes, plus a dashed
 * least-squares fit to the l1 data with its slope in the legend.
 *
 * Every plotted number is taken verbatim from the CSV rows; the only
 * derived artifact is the fit-line annotation.
 */
import { CsvTable, readConvergenceCsv, Row } from "./schema.js";
import { Panel, Series } from "./svg.js";

const ERROR_NORMS = ["l1", "linf", "ks"] as const;

function leastSquaresLogLog(h: number[], e: number[]): { slope: number; intercept: number } {
  const lx = h.map(Math.log);
  const ly = e.map(Math.log);
  const n = lx.length;
  const mx = lx.reduce((a, b) => a + b, 0) / n;
  const my = ly.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}

export function buildConvergencePanels(tables: CsvTable[]): Panel[] {
  const byProblem = new Map<string, Row[]>();
  for (const table of tables) {
    for (const row of table.rows) {
      const name = String(row.problem);
      if (!byProblem.has(name)) {
        byProblem.set(name, []);
      }
      byProblem.get(name)!.push(row);
    }
  }

  const panels: Panel[] = [];
  for (const [problem, rows] of byProblem) {
    const h = rows.map((r) => Number(r.h));
    const series: Series[] = ERROR_NORMS.map((norm) => ({
      name: norm,
      x: h,
      y: rows.map((r) => Number(r[norm])),
    }));
    if (h.length >= 2 && new Set(h).size >= 2) {
      const { slope, intercept } = leastSquaresLogLog(h, series[0].y);
      const hMin = Math.min(...h);
      const hMax = Math.max(...h);
      series[0].fit = {
        x: [hMin, hMax],
        y: [
          Math.exp(intercept + slope * Math.log(hMin)),
          Math.exp(intercept + slope * Math.log(hMax)),
        ],
        label: `slope ${slope.toFixed(2)}`,
      };
    }
    panels.push({ title: problem, xLabel: "h", yLabel: "error", series });
  }
  return panels;
}

export function convergenceFigure(paths: string[]): { panels: Panel[]; columns: number } {
  const tables = paths.map(readConvergenceCsv);
  const panels = buildConvergencePanels(tables);
  return { panels, columns: 2 };
}
