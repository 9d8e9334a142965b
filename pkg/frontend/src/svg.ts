/**
 * Minimal hand-assembled SVG line charts.
 *
 * Output depends only on the data passed in: fixed fonts, fixed palette,
 * no timestamps, so rendering the same CSVs twice gives identical bytes.
 */

export interface Series {
  x: number[];
  y: number[];
  color: string;
  label: string;
  width?: number;
  /** stroke-dasharray; solid when absent */
  dash?: string;
  /** draw a small circle at every point */
  markers?: boolean;
}

export interface PanelOptions {
  title?: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  xMin?: number;
  xMax?: number;
  yMin?: number;
  yMax?: number;
  logY?: boolean;
  /** extra text lines drawn inside the plot area, top-left */
  notes?: string[];
  legend?: boolean;
}

const PANEL_W = 640;
const PANEL_H = 300;
const ML = 64;
const MR = 160;
const MT = 30;
const MB = 44;

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(v: number): string {
  return v.toFixed(2);
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function tickLabel(v: number): string {
  if (v === 0) return "0";
  if (Math.abs(v) >= 1000 || Math.abs(v) < 0.01) return v.toExponential(0);
  return String(Math.round(v * 100) / 100);
}

/** Renders one cartesian panel as an SVG group at the given y offset. */
export function buildPanel(opts: PanelOptions, yOffset: number): string {
  const pw = PANEL_W - ML - MR;
  const ph = PANEL_H - MT - MB;
  const top = yOffset + MT;

  const xs = opts.series.flatMap((s) => s.x);
  const xMin = opts.xMin ?? Math.min(...xs);
  const xMax = opts.xMax ?? Math.max(...xs);
  const xOf = (v: number) => ML + ((v - xMin) / (xMax - xMin || 1)) * pw;

  let yOf: (v: number) => number;
  let yTicks: number[];
  let yFmt: (v: number) => string;
  let keep: (v: number) => boolean;
  if (opts.logY) {
    const positives = opts.series.flatMap((s) => s.y).filter((v) => v > 0);
    if (positives.length === 0) {
      throw new Error("log-scale panel has no positive values");
    }
    const lo = Math.floor(Math.log10(opts.yMin ?? Math.min(...positives)));
    const hi = Math.ceil(Math.log10(opts.yMax ?? Math.max(...positives)));
    const span = hi - lo || 1;
    yOf = (v: number) => top + ph - ((Math.log10(v) - lo) / span) * ph;
    yTicks = [];
    for (let d = lo; d <= hi; d++) yTicks.push(Math.pow(10, d));
    yFmt = (v: number) => v.toExponential(0).replace("e+0", "e0");
    keep = (v: number) => v > 0 && v >= Math.pow(10, lo) && v <= Math.pow(10, hi);
  } else {
    const ys = opts.series.flatMap((s) => s.y);
    const rawMin = opts.yMin ?? Math.min(...ys);
    const rawMax = opts.yMax ?? Math.max(...ys);
    const pad = (rawMax - rawMin || 1) * 0.06;
    const yMin = opts.yMin ?? rawMin - pad;
    const yMax = opts.yMax ?? rawMax + pad;
    yOf = (v: number) => top + ph - ((v - yMin) / (yMax - yMin || 1)) * ph;
    yTicks = niceTicks(yMin, yMax, 5);
    yFmt = tickLabel;
    keep = () => true;
  }

  let s = `<g>\n`;
  if (opts.title) {
    s += `<text x="${ML}" y="${top - 10}" font-size="11" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  }

  // frame and gridlines
  s += `<rect x="${ML}" y="${top}" width="${pw}" height="${ph}" fill="none" stroke="#999" stroke-width="0.8"/>\n`;
  for (const v of yTicks) {
    const y = yOf(v);
    if (y < top - 0.5 || y > top + ph + 0.5) continue;
    s += `<line x1="${ML}" y1="${fmt(y)}" x2="${ML + pw}" y2="${fmt(y)}" stroke="#e4e4e4" stroke-width="0.5"/>\n`;
    s += `<text x="${ML - 6}" y="${fmt(y + 3)}" font-size="9" text-anchor="end" fill="#444">${esc(yFmt(v))}</text>\n`;
  }
  if (opts.logY) {
    // minor decade gridlines
    for (const major of yTicks.slice(0, -1)) {
      for (let k = 2; k <= 9; k++) {
        const y = yOf(major * k);
        if (y < top || y > top + ph) continue;
        s += `<line x1="${ML}" y1="${fmt(y)}" x2="${ML + pw}" y2="${fmt(y)}" stroke="#f2f2f2" stroke-width="0.4"/>\n`;
      }
    }
  }
  for (const v of niceTicks(xMin, xMax, 8)) {
    const x = xOf(v);
    if (x < ML - 0.5 || x > ML + pw + 0.5) continue;
    s += `<line x1="${fmt(x)}" y1="${top}" x2="${fmt(x)}" y2="${top + ph}" stroke="#e4e4e4" stroke-width="0.5"/>\n`;
    s += `<text x="${fmt(x)}" y="${top + ph + 14}" font-size="9" text-anchor="middle" fill="#444">${esc(tickLabel(v))}</text>\n`;
  }

  // axis labels
  s += `<text x="${ML + pw / 2}" y="${top + ph + 30}" font-size="10" text-anchor="middle" fill="#222">${esc(opts.xLabel)}</text>\n`;
  s += `<text x="16" y="${top + ph / 2}" font-size="10" text-anchor="middle" fill="#222" transform="rotate(-90 16 ${top + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  // series
  for (const series of opts.series) {
    const width = series.width ?? 1.4;
    const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
    let d = "";
    let pen = false;
    for (let i = 0; i < series.x.length; i++) {
      const xv = series.x[i];
      const yv = series.y[i];
      if (!keep(yv) || xv < xMin - 1e-9 || xv > xMax + 1e-9) {
        pen = false;
        continue;
      }
      d += `${pen ? "L" : "M"}${fmt(xOf(xv))} ${fmt(yOf(yv))}`;
      pen = true;
    }
    if (d.length === 0) continue;
    s += `<path d="${d}" fill="none" stroke="${series.color}" stroke-width="${width}"${dash}/>\n`;
    if (series.markers) {
      for (let i = 0; i < series.x.length; i++) {
        if (!keep(series.y[i])) continue;
        const x = xOf(series.x[i]);
        if (x < xMin - 1e-9 && x > xMax + 1e-9) continue;
        s += `<circle cx="${fmt(x)}" cy="${fmt(yOf(series.y[i]))}" r="2" fill="${series.color}"/>\n`;
      }
    }
  }

  // notes
  (opts.notes ?? []).forEach((line, index) => {
    s += `<text x="${ML + 8}" y="${top + 14 + index * 12}" font-size="9" fill="#333">${esc(line)}</text>\n`;
  });

  // legend
  if (opts.legend !== false) {
    opts.series.forEach((series, index) => {
      const y = top + 8 + index * 14;
      const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
      s += `<line x1="${ML + pw + 10}" y1="${y}" x2="${ML + pw + 34}" y2="${y}" stroke="${series.color}" stroke-width="${series.width ?? 1.4}"${dash}/>\n`;
      s += `<text x="${ML + pw + 39}" y="${y + 3}" font-size="9" fill="#222">${esc(series.label)}</text>\n`;
    });
  }

  s += `</g>\n`;
  return s;
}

/** Stacks panels vertically into one standalone SVG document. */
export function assemble(panels: PanelOptions[]): string {
  const height = panels.length * PANEL_H;
  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${PANEL_W} ${height}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${PANEL_W}" height="${height}" fill="#fff"/>\n`;
  panels.forEach((panel, index) => {
    s += buildPanel(panel, index * PANEL_H);
  });
  s += `</svg>\n`;
  return s;
}
