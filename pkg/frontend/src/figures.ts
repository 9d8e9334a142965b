/**
 * Figure assembly: maps each CSV bundle onto styled panels.
 *
 * Conventions: symbol error rates plot on a logarithmic y axis with
 * measured curves solid (markers on) and analytic curves dashed; filter
 * plots draw real parts solid and imaginary parts dashed.
 */

import { loadFilterData, loadPsdData, loadSerCurves, ResponseTrace, SerCurve } from "./csv.js";
import { assemble, PanelOptions, Series } from "./svg.js";

const CURVE_COLORS: Record<string, string> = {
  "qam-zf": "#1f6fb4",
  "oqam-mf": "#2a9d4e",
  "croqam-mf": "#d62728",
  "qam-zf-trstc": "#7b4fa6",
  "croqam-mf-trstc": "#b8860b",
};
const FALLBACK_COLOR = "#555";
const DASH = "5,3";

function serSeries(curve: SerCurve): Series {
  const base = curve.configId.replace(/-theory$/, "");
  return {
    x: curve.points.map((p) => p.snrDb),
    y: curve.points.map((p) => p.ser),
    color: CURVE_COLORS[base] ?? FALLBACK_COLOR,
    label: curve.configId,
    dash: curve.analytic ? DASH : undefined,
    markers: !curve.analytic,
    width: curve.analytic ? 1.1 : 1.5,
  };
}

export function renderSerFigure(dir: string): string {
  const curves = loadSerCurves(dir);
  const measured = curves.filter((c) => !c.analytic);
  const analytic = curves.filter((c) => c.analytic);
  const panel: PanelOptions = {
    title: "Symbol error rate over the fading channel",
    xLabel: "SNR (dB)",
    yLabel: "symbol error rate",
    logY: true,
    series: [...measured, ...analytic].map(serSeries),
  };
  return assemble([panel]);
}

function responseSeries(
  name: string,
  trace: ResponseTrace,
  part: "freq" | "pulse"
): Series[] {
  const re = part === "freq" ? trace.reFreq : trace.rePulse;
  const im = part === "freq" ? trace.imFreq : trace.imPulse;
  const color = name === "crrc" ? "#d62728" : "#1f6fb4";
  return [
    { x: trace.axis, y: re, color, label: `${name} real` },
    { x: trace.axis, y: im, color, label: `${name} imag`, dash: DASH, width: 1.1 },
  ];
}

export function renderFilterFigure(dir: string): string {
  const data = loadFilterData(dir);
  const spectra: Series[] = [];
  const pulses: Series[] = [];
  const interference: Series[] = [];
  for (const [name, trace] of data.filters) {
    spectra.push(...responseSeries(name, trace, "freq"));
    pulses.push(...responseSeries(name, trace, "pulse"));
  }
  for (const [name, trace] of data.interference) {
    interference.push(...responseSeries(name, trace, "pulse"));
  }
  const panels: PanelOptions[] = [
    {
      title: "Half-Nyquist frequency responses",
      xLabel: "frequency (subcarrier spacings)",
      yLabel: "amplitude",
      series: spectra,
      xMin: -2,
      xMax: 2,
    },
    {
      title: "Prototype pulses",
      xLabel: "time (symbol periods)",
      yLabel: "amplitude",
      series: pulses,
    },
    {
      title: "First-neighbor interference pulses",
      xLabel: "time (symbol periods)",
      yLabel: "amplitude",
      series: interference,
    },
  ];
  return assemble(panels);
}

export function renderPsdFigure(dir: string): string {
  const data = loadPsdData(dir);
  const palette: Record<string, string> = {
    "oqam-mf": "#7a7a7a",
    "croqam-mf": "#d62728",
  };
  const notes = ["in-band / out-of-band ratio:"];
  for (const [configId, ratio] of data.oobRatios) {
    notes.push(`  ${configId}: ${ratio.toFixed(1)} dB`);
  }
  const panel: PanelOptions = {
    title: "Power spectral density with guarded block edges",
    xLabel: "frequency (subcarrier spacings)",
    yLabel: "PSD (dB, peak-normalized)",
    series: data.traces.map((trace) => ({
      x: trace.freqNorm,
      y: trace.psdDb,
      color: palette[trace.configId] ?? FALLBACK_COLOR,
      label: trace.configId,
      width: 1.0,
    })),
    notes,
  };
  return assemble([panel]);
}
