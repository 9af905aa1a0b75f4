/**
 * CSV parsing and schema validation for the harness output files.
 *
 * Two schemas are consumed:
 *
 *   convergence:  problem,h,k,M,l1,linf,ks,norm_defect
 *   benchmark:    problem,h,k,M,l1,linf,ks,norm_defect,method,wall_seconds,reps
 *
 * Validation happens up front, before any figure is assembled, and failures
 * name the offending column.
 */
import { existsSync, readFileSync } from "fs";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export const CONVERGENCE_COLUMNS = [
  "problem",
  "h",
  "k",
  "M",
  "l1",
  "linf",
  "ks",
  "norm_defect",
] as const;

export const BENCHMARK_COLUMNS = [
  ...CONVERGENCE_COLUMNS,
  "method",
  "wall_seconds",
  "reps",
] as const;

/** Columns plotted on logarithmic axes; their values must be positive. */
const LOG_SCALE_COLUMNS = new Set(["h", "l1", "linf", "ks", "wall_seconds"]);
const TEXT_COLUMNS = new Set(["problem", "method"]);

export type Row = Record<string, string | number>;

export interface CsvTable {
  path: string;
  columns: string[];
  rows: Row[];
}

function splitCsv(text: string): string[][] {
  return text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0)
    .map((line) => line.split(",").map((tok) => tok.trim()));
}

export function readTable(path: string, required: readonly string[]): CsvTable {
  if (!existsSync(path)) {
    throw new SchemaError(`input CSV does not exist: ${path}`);
  }
  const cells = splitCsv(readFileSync(path, "utf-8"));
  if (cells.length === 0) {
    throw new SchemaError(`${path}: file is empty (no header row)`);
  }
  const columns = cells[0];
  for (const name of required) {
    if (!columns.includes(name)) {
      throw new SchemaError(`${path}: missing required column "${name}"`);
    }
  }
  const body = cells.slice(1);
  if (body.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const rows: Row[] = body.map((tokens, i) => {
    if (tokens.length !== columns.length) {
      throw new SchemaError(
        `${path}: row ${i + 2} has ${tokens.length} fields, header has ${columns.length}`,
      );
    }
    const row: Row = {};
    columns.forEach((name, j) => {
      if (TEXT_COLUMNS.has(name)) {
        row[name] = tokens[j];
        return;
      }
      const value = Number(tokens[j]);
      if (!Number.isFinite(value)) {
        throw new SchemaError(
          `${path}: row ${i + 2}, column "${name}": not a finite number (${tokens[j]})`,
        );
      }
      if (LOG_SCALE_COLUMNS.has(name) && value <= 0) {
        throw new SchemaError(
          `${path}: row ${i + 2}, column "${name}": log-scaled values must be positive (${tokens[j]})`,
        );
      }
      row[name] = value;
    });
    return row;
  });
  return { path, columns, rows };
}

export function readConvergenceCsv(path: string): CsvTable {
  return readTable(path, CONVERGENCE_COLUMNS);
}

export function readBenchmarkCsv(path: string): CsvTable {
  return readTable(path, BENCHMARK_COLUMNS);
}
