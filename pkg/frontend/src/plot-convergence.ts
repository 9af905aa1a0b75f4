#!/usr/bin/env node
import { convergenceFigure } from "./convergence.js";
import { runPlotter } from "./cli.js";

const USAGE = "usage: plot-convergence <csv...> -o out.svg [--dry-run]";

process.exit(runPlotter("plot-convergence", USAGE, convergenceFigure, process.argv.slice(2)));
