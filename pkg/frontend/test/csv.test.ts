import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import path from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";

import {
  loadFilterData,
  loadPsdData,
  loadSerCurves,
  PSD_HEADER,
  readTable,
  SER_HEADER,
} from "../src/csv.js";

const DATA = fileURLToPath(new URL("../testdata", import.meta.url));

function tempFile(content: string): string {
  const dir = mkdtempSync(path.join(tmpdir(), "csv-"));
  const file = path.join(dir, "t.csv");
  writeFileSync(file, content);
  return file;
}

describe("readTable", () => {
  it("parses a well-formed table", () => {
    const table = readTable(path.join(DATA, "fig2b", "ser_combined.csv"), SER_HEADER);
    expect(table.rows.length).toBeGreaterThan(50);
    expect(table.rows[0]).toHaveLength(SER_HEADER.length);
  });

  it("rejects a wrong header", () => {
    const file = path.join(DATA, "fig2c", "psd_oqam.csv");
    expect(() => readTable(file, SER_HEADER)).toThrow(/header mismatch/);
  });

  it("rejects an empty file", () => {
    expect(() => readTable(tempFile(""), PSD_HEADER)).toThrow(/empty/);
  });

  it("rejects a header-only file", () => {
    const file = tempFile(PSD_HEADER.join(",") + "\n");
    expect(() => readTable(file, PSD_HEADER)).toThrow(/no data rows/);
  });

  it("rejects a ragged row", () => {
    const file = tempFile(PSD_HEADER.join(",") + "\nx,1.0\n");
    expect(() => readTable(file, PSD_HEADER)).toThrow(/row 2 has 2 cells/);
  });

  it("reports unreadable paths", () => {
    expect(() => readTable("/nonexistent/r.csv", PSD_HEADER)).toThrow(/cannot read/);
  });
});

describe("loadSerCurves", () => {
  it("groups rows into measured and analytic curves", () => {
    const curves = loadSerCurves(path.join(DATA, "fig2b"));
    const ids = curves.map((c) => c.configId);
    expect(ids).toContain("qam-zf");
    expect(ids).toContain("qam-zf-theory");
    expect(ids).toContain("croqam-mf-trstc");

    const measured = curves.find((c) => c.configId === "qam-zf")!;
    expect(measured.analytic).toBe(false);
    expect(measured.points).toHaveLength(10);
    expect(measured.points.every((p) => p.flag === "ok" || p.flag === "low_errors")).toBe(true);

    const theory = curves.find((c) => c.configId === "qam-zf-theory")!;
    expect(theory.analytic).toBe(true);
    expect(theory.points.every((p) => p.ser > 0)).toBe(true);
  });
});

describe("loadPsdData", () => {
  it("loads both traces and the ratio summary", () => {
    const data = loadPsdData(path.join(DATA, "fig2c"));
    expect(data.traces.map((t) => t.configId)).toEqual(["oqam-mf", "croqam-mf"]);
    expect(data.traces[0].freqNorm).toHaveLength(448);
    expect(data.oobRatios.has("margin-croqam-vs-oqam")).toBe(true);
    expect(data.oobRatios.get("croqam-mf")!).toBeGreaterThan(data.oobRatios.get("oqam-mf")!);
  });
});

describe("loadFilterData", () => {
  it("loads filter and interference responses for both designs", () => {
    const data = loadFilterData(path.join(DATA, "fig1"));
    expect([...data.filters.keys()]).toEqual(["rrc", "crrc"]);
    const crrc = data.filters.get("crrc")!;
    expect(crrc.axis[0]).toBe(-8);
    // the conjugate-root spectrum is genuinely complex, the symmetric root's is not
    const energy = (t: number[]) => t.reduce((acc, v) => acc + v * v, 0);
    expect(energy(crrc.imFreq)).toBeGreaterThan(1e-6);
    expect(energy(data.filters.get("rrc")!.imFreq)).toBeLessThan(1e-12);
  });
});
