#!/usr/bin/env node
import { benchmarkFigure } from "./benchmark.js";
import { runPlotter } from "./cli.js";

const USAGE = "usage: plot-benchmark <csv...> -o out.svg [--dry-run]";

process.exit(runPlotter("plot-benchmark", USAGE, benchmarkFigure, process.argv.slice(2)));
