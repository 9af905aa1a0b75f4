/**
 * Figure builder for the wall-time-vs-error comparison: one panel per input
 * CSV (each CSV holds one domain-scaling regime), one scatter+line series
 * per method, log-log axes with the l1 error on x and seconds on y.
 */
import { basename } from "path";

import { CsvTable, readBenchmarkCsv, Row } from "./schema.js";
import { Panel, Series } from "./svg.js";

export function buildBenchmarkPanel(table: CsvTable): Panel {
  const byMethod = new Map<string, Row[]>();
  for (const row of table.rows) {
    const method = String(row.method);
    if (!byMethod.has(method)) {
      byMethod.set(method, []);
    }
    byMethod.get(method)!.push(row);
  }
  const series: Series[] = [];
  for (const [method, rows] of byMethod) {
    series.push({
      name: method,
      x: rows.map((r) => Number(r.l1)),
      y: rows.map((r) => Number(r.wall_seconds)),
    });
  }
  const title = basename(table.path).replace(/\.csv$/i, "");
  return { title, xLabel: "l1 error", yLabel: "wall clock (s)", series };
}

export function benchmarkFigure(paths: string[]): { panels: Panel[]; columns: number } {
  const tables = paths.map(readBenchmarkCsv);
  return { panels: tables.map(buildBenchmarkPanel), columns: tables.length };
}
