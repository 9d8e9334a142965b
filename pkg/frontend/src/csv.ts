/**
 * CSV loading with strict header validation.
 *
 * Every reader checks the header line against the documented format and
 * refuses anything else, so a renderer never silently misreads columns.
 */

import { readFileSync } from "fs";
import path from "path";

export interface Table {
  path: string;
  rows: string[][];
}

export const SER_HEADER = [
  "config_id", "snr_db", "ser", "errors", "decisions", "trials", "flag",
];
export const PSD_HEADER = ["config_id", "freq_norm", "psd_db"];
export const OOB_HEADER = ["config_id", "oob_ratio_db"];
export const FILTER_HEADER = [
  "bin", "freq_over_F", "re_G", "im_G", "re_g", "im_g",
];

export function readTable(filePath: string, expectedHeader: string[]): Table {
  let text: string;
  try {
    text = readFileSync(filePath, "utf-8");
  } catch (err) {
    throw new Error(`cannot read ${filePath}: ${(err as Error).message}`);
  }
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${filePath}: file is empty`);
  }
  const header = lines[0].split(",");
  if (header.join(",") !== expectedHeader.join(",")) {
    throw new Error(
      `${filePath}: header mismatch\n  expected: ${expectedHeader.join(",")}\n  found:    ${header.join(",")}`
    );
  }
  if (lines.length === 1) {
    throw new Error(`${filePath}: no data rows`);
  }
  const rows = lines.slice(1).map((line, index) => {
    const cells = line.split(",");
    if (cells.length !== expectedHeader.length) {
      throw new Error(
        `${filePath}: row ${index + 2} has ${cells.length} cells, expected ${expectedHeader.length}`
      );
    }
    return cells;
  });
  return { path: filePath, rows };
}

function num(table: Table, row: string[], column: number): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new Error(`${table.path}: cannot parse "${row[column]}" as a number`);
  }
  return value;
}

// ---------------------------------------------------------------------------
// SER curves
// ---------------------------------------------------------------------------

export interface SerPoint {
  snrDb: number;
  ser: number;
  flag: string;
}

export interface SerCurve {
  configId: string;
  analytic: boolean;
  points: SerPoint[];
}

/** Reads ser_combined.csv and groups rows into per-configuration curves. */
export function loadSerCurves(dir: string): SerCurve[] {
  const table = readTable(path.join(dir, "ser_combined.csv"), SER_HEADER);
  const byId = new Map<string, SerCurve>();
  for (const row of table.rows) {
    const configId = row[0];
    let curve = byId.get(configId);
    if (!curve) {
      curve = { configId, analytic: row[6] === "analytic", points: [] };
      byId.set(configId, curve);
    }
    curve.points.push({
      snrDb: num(table, row, 1),
      ser: num(table, row, 2),
      flag: row[6],
    });
  }
  return [...byId.values()];
}

// ---------------------------------------------------------------------------
// PSD traces
// ---------------------------------------------------------------------------

export interface PsdTrace {
  configId: string;
  freqNorm: number[];
  psdDb: number[];
}

export interface PsdData {
  traces: PsdTrace[];
  /** config_id -> in-band over out-of-band ratio in dB, plus the margin row. */
  oobRatios: Map<string, number>;
}

export function loadPsdData(dir: string): PsdData {
  const traces: PsdTrace[] = [];
  for (const name of ["psd_oqam.csv", "psd_croqam.csv"]) {
    const table = readTable(path.join(dir, name), PSD_HEADER);
    const trace: PsdTrace = { configId: table.rows[0][0], freqNorm: [], psdDb: [] };
    for (const row of table.rows) {
      trace.freqNorm.push(num(table, row, 1));
      trace.psdDb.push(num(table, row, 2));
    }
    traces.push(trace);
  }
  const summary = readTable(path.join(dir, "oob_summary.csv"), OOB_HEADER);
  const oobRatios = new Map<string, number>();
  for (const row of summary.rows) {
    oobRatios.set(row[0], num(summary, row, 1));
  }
  return { traces, oobRatios };
}

// ---------------------------------------------------------------------------
// Filter and interference responses
// ---------------------------------------------------------------------------

export interface ResponseTrace {
  /** Centered axis in subcarrier spacings (spectra) or symbol periods (pulses). */
  axis: number[];
  reFreq: number[];
  imFreq: number[];
  rePulse: number[];
  imPulse: number[];
}

export interface FilterData {
  filters: Map<string, ResponseTrace>;
  interference: Map<string, ResponseTrace>;
}

function loadResponse(filePath: string): ResponseTrace {
  const table = readTable(filePath, FILTER_HEADER);
  const trace: ResponseTrace = {
    axis: [], reFreq: [], imFreq: [], rePulse: [], imPulse: [],
  };
  for (const row of table.rows) {
    trace.axis.push(num(table, row, 1));
    trace.reFreq.push(num(table, row, 2));
    trace.imFreq.push(num(table, row, 3));
    trace.rePulse.push(num(table, row, 4));
    trace.imPulse.push(num(table, row, 5));
  }
  return trace;
}

export function loadFilterData(dir: string): FilterData {
  const filters = new Map<string, ResponseTrace>();
  const interference = new Map<string, ResponseTrace>();
  for (const name of ["rrc", "crrc"]) {
    filters.set(name, loadResponse(path.join(dir, `filter_${name}.csv`)));
    interference.set(name, loadResponse(path.join(dir, `ici_${name}.csv`)));
  }
  return { filters, interference };
}
