/**
 * Figure assembly: a PlotSpec names the sweep artifact, the figure kind and
 * the output path; rendering never mutates inputs and never computes
 * reference curves (overlays are supplied as external CSVs).
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { empiricalCdf, stepPolyline } from "./cdf.js";
import { loadOverlayCsv, loadSweepCsv, loadSweepJson } from "./schema.js";
import { Curve, Figure, renderSvg } from "./svg.js";

export type FigureKind = "se_vs_snr" | "cdf_d" | "cdf_n";

export interface PlotSpec {
  kind: FigureKind;
  /** sweep artifact: results CSV for se_vs_snr, JSON sidecar for the CDFs */
  input: string;
  /** external reference-curve CSVs (columns x, y, optional label) */
  overlays?: string[];
  /** output SVG path */
  output: string;
}

export function buildFigure(spec: Omit<PlotSpec, "output">): Figure {
  const overlays: Curve[] = (spec.overlays ?? []).map((path) => {
    const o = loadOverlayCsv(path);
    return { label: o.label, xs: o.xs, ys: o.ys, kind: "dashed" };
  });

  if (spec.kind === "se_vs_snr") {
    const rows = loadSweepCsv(spec.input);
    const curves: Curve[] = [
      {
        label: "simulated",
        xs: rows.map((r) => r.snr_db),
        ys: rows.map((r) => r.se),
        kind: "line",
        markers: true,
      },
      {
        label: "upper bound",
        xs: rows.map((r) => r.snr_db),
        ys: rows.map((r) => r.se_ub),
        kind: "dashed",
      },
      ...overlays,
    ];
    const top = Math.max(...curves.flatMap((c) => c.ys));
    return {
      xLabel: "SNR (dB)",
      yLabel: "spectral efficiency (bits/s/Hz)",
      curves,
      yRange: [0, 1.08 * top],
    };
  }

  const field = spec.kind === "cdf_d" ? "d_samples" : "n_samples";
  const doc = loadSweepJson(spec.input, field);
  const cdfs = doc.points.map((p) => empiricalCdf(p[field]));
  // shared x-range over the per-SNR curves; the floor of 1 keeps a
  // one-sample distribution readable as a step
  const xsAll = cdfs.flatMap((c) => c.xs);
  const lo = Math.min(...xsAll);
  const hi = Math.max(...xsAll);
  const pad = Math.max(1, 0.05 * (hi - lo));
  const xRange: [number, number] = [lo - pad, hi + pad];
  const curves: Curve[] = doc.points.map((p, i) => ({
    label: `${p.snr_db} dB`,
    ...stepPolyline(cdfs[i], xRange[0], xRange[1]),
    kind: "line",
  }));
  curves.push(...overlays);
  return {
    xLabel: spec.kind === "cdf_d" ? "iteration count" : "codeword length (bits)",
    yLabel: "CDF",
    curves,
    xRange,
    yRange: [0, 1.05],
  };
}

export function render(spec: PlotSpec): string {
  const svg = renderSvg(buildFigure(spec));
  const dir = dirname(spec.output);
  if (dir.length > 0) {
    mkdirSync(dir, { recursive: true });
  }
  writeFileSync(spec.output, svg);
  return svg;
}
