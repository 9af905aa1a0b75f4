/**
 * Shared command-line front end for the two plotters.
 *
 *   plot-convergence ex1.csv ex2.csv ... -o figure.svg
 *   plot-benchmark poly.csv log.csv -o figure.svg [--dry-run]
 *
 * --dry-run validates the inputs, prints the plotted arrays as JSON to
 * stdout, and writes nothing; it exists so the figure contents can be
 * diffed against the CSVs they came from.
 */
import { writeFileSync } from "fs";

import { SchemaError } from "./schema.js";
import { Panel, renderFigure } from "./svg.js";

export interface CliOptions {
  inputs: string[];
  out: string | null;
  dryRun: boolean;
}

export function parseArgs(argv: string[]): CliOptions {
  const inputs: string[] = [];
  let out: string | null = null;
  let dryRun = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-o" || arg === "--out") {
      if (i + 1 >= argv.length) {
        throw new UsageError(`${arg} needs a path argument`);
      }
      out = argv[++i];
    } else if (arg === "--dry-run") {
      dryRun = true;
    } else if (arg === "-h" || arg === "--help") {
      throw new UsageError("");
    } else if (arg.startsWith("-")) {
      throw new UsageError(`unknown flag ${arg}`);
    } else {
      inputs.push(arg);
    }
  }
  return { inputs, out, dryRun };
}

export class UsageError extends Error {}

export function dryRunDump(panels: Panel[]): string {
  return JSON.stringify(
    {
      panels: panels.map((p) => ({
        title: p.title,
        series: p.series.map((s) => ({ name: s.name, x: s.x, y: s.y })),
      })),
    },
    null,
    1,
  );
}

export function runPlotter(
  name: string,
  usage: string,
  build: (paths: string[]) => { panels: Panel[]; columns: number },
  argv: string[],
): number {
  let options: CliOptions;
  try {
    options = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      if (err.message) {
        console.error(`${name}: ${err.message}`);
      }
      console.error(usage);
      return 2;
    }
    throw err;
  }
  if (options.inputs.length === 0) {
    console.error(`${name}: no input CSVs given`);
    console.error(usage);
    return 2;
  }
  if (!options.dryRun && options.out === null) {
    console.error(`${name}: -o <path> is required unless --dry-run is set`);
    console.error(usage);
    return 2;
  }
  try {
    const { panels, columns } = build(options.inputs);
    if (options.dryRun) {
      console.log(dryRunDump(panels));
      return 0;
    }
    writeFileSync(options.out!, renderFigure(panels, columns));
    console.error(`${name}: wrote ${options.out} (${panels.length} panel(s))`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`${name}: ${err.message}`);
      return 1;
    }
    throw err;
  }
}
