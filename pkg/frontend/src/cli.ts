#!/usr/bin/env node
/**
 * render_figs <kind> --in <dir> --out <file>
 *
 * Renders an SVG figure from a directory of result CSVs written by the
 * simulation CLI. Kinds (with the preset-name aliases):
 *
 *   filter | fig1   filter_*.csv + ici_*.csv   response panels
 *   ser    | fig2b  ser_combined.csv           log-scale error-rate curves
 *   psd    | fig2c  psd_*.csv + oob_summary.csv spectra overlay
 *
 * Exit codes: 0 ok, 1 bad or missing input data, 2 usage error.
 */

import { writeFileSync } from "fs";
import { renderFilterFigure, renderPsdFigure, renderSerFigure } from "./figures.js";

const RENDERERS: Record<string, (dir: string) => string> = {
  filter: renderFilterFigure,
  fig1: renderFilterFigure,
  ser: renderSerFigure,
  fig2b: renderSerFigure,
  psd: renderPsdFigure,
  fig2c: renderPsdFigure,
};

const USAGE =
  "usage: render_figs <filter|ser|psd> --in <results-dir> --out <image.svg>\n" +
  "       (preset aliases: fig1=filter, fig2b=ser, fig2c=psd)";

interface Args {
  kind: string;
  inDir: string;
  outFile: string;
}

function parseArgs(argv: string[]): Args {
  let kind = "";
  let inDir = "";
  let outFile = "";
  let index = 0;
  while (index < argv.length) {
    const arg = argv[index];
    if (arg === "--in") {
      inDir = argv[index + 1] ?? "";
      index += 2;
    } else if (arg === "--out") {
      outFile = argv[index + 1] ?? "";
      index += 2;
    } else if (!arg.startsWith("-") && kind === "") {
      kind = arg;
      index += 1;
    } else {
      throw new Error(`unexpected argument: ${arg}`);
    }
  }
  if (!kind || !inDir || !outFile) {
    throw new Error("kind, --in and --out are all required");
  }
  if (!(kind in RENDERERS)) {
    throw new Error(`unknown figure kind: ${kind}`);
  }
  return { kind, inDir, outFile };
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    console.error(USAGE);
    return 2;
  }
  try {
    const svg = RENDERERS[args.kind](args.inDir);
    writeFileSync(args.outFile, svg);
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  console.log(`wrote ${args.outFile}`);
  return 0;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("render_figs")) {
  process.exit(run(process.argv.slice(2)));
}
