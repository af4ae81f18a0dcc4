/**
 * Loaders for the sweep artifacts this tool consumes: the results CSV
 * (one row per SNR point) and its JSON sidecar (same fields plus the raw
 * per-trial samples). Columns a figure references are validated up front so
 * a schema mismatch fails with the missing names, not NaN geometry.
 */

import { readFileSync } from "node:fs";
import { basename } from "node:path";
import Papa from "papaparse";

export interface SweepRow {
  snr_db: number;
  modulation: string;
  R: number;
  H: number;
  K: number;
  trials: number;
  se: number;
  se_ub: number;
  alpha: number;
  bler: number;
  mean_D: number;
  N_min: number;
  N_max: number;
  dispersion: number;
  en_sim: number;
  en_eq41: number;
}

export interface SweepPoint extends SweepRow {
  seed: number;
  d_samples: number[];
  n_samples: number[];
}

export interface SweepDoc {
  config: Record<string, unknown>;
  points: SweepPoint[];
}

export interface OverlayCurve {
  label: string;
  xs: number[];
  ys: number[];
}

interface ParsedCsv {
  rows: Record<string, unknown>[];
  fields: string[];
}

function parseCsv(path: string): ParsedCsv {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, unknown>>(text, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`cannot parse ${path}: ${parsed.errors[0].message}`);
  }
  return { rows: parsed.data, fields: parsed.meta.fields ?? [] };
}

function requireColumns(fields: string[], path: string, columns: string[]): void {
  const present = new Set(fields);
  const missing = columns.filter((c) => !present.has(c));
  if (missing.length > 0) {
    throw new Error(`missing column(s) in ${path}: ${missing.join(", ")}`);
  }
}

export function loadSweepCsv(path: string): SweepRow[] {
  const { rows, fields } = parseCsv(path);
  requireColumns(fields, path, ["snr_db", "se", "se_ub"]);
  if (rows.length === 0) {
    throw new Error(`no data rows in ${path}`);
  }
  return (rows as unknown as SweepRow[]).slice().sort((a, b) => a.snr_db - b.snr_db);
}

/** External reference curves (supplied, never computed): columns x, y and an optional label. */
export function loadOverlayCsv(path: string): OverlayCurve {
  const { rows, fields } = parseCsv(path);
  requireColumns(fields, path, ["x", "y"]);
  const first = rows[0];
  const label =
    first && typeof first.label === "string" ? first.label : basename(path, ".csv");
  return {
    label,
    xs: rows.map((r) => Number(r.x)),
    ys: rows.map((r) => Number(r.y)),
  };
}

/** Sidecar JSON with per-trial samples; samplesField is the array each point must carry. */
export function loadSweepJson(path: string, samplesField: "d_samples" | "n_samples"): SweepDoc {
  const doc = JSON.parse(readFileSync(path, "utf8")) as SweepDoc;
  if (!Array.isArray(doc.points) || doc.points.length === 0) {
    throw new Error(`no points in ${path}`);
  }
  doc.points.forEach((p, i) => {
    if (!Array.isArray(p[samplesField])) {
      throw new Error(`missing field in ${path}: points[${i}].${samplesField}`);
    }
  });
  return doc;
}
