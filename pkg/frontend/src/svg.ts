/**
 * Minimal deterministic SVG line figures: fixed canvas, fixed palette, no
 * DOM, no dates, no randomness, so identical figures serialize to identical
 * bytes. Everything is string templating over scaled coordinates.
 */

export interface Curve {
  label: string;
  xs: number[];
  ys: number[];
  kind: "line" | "dashed";
  /** draw a circle at every vertex (a single-point curve shows as one marker) */
  markers?: boolean;
}

export interface Figure {
  xLabel: string;
  yLabel: string;
  curves: Curve[];
  xRange?: [number, number];
  yRange?: [number, number];
}

const W = 640;
const H = 420;
const M = { left: 64, right: 18, top: 16, bottom: 48 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

const px = (v: number): string => v.toFixed(2);

/** tick label free of float noise */
const fmt = (v: number): string => String(Number(v.toPrecision(10)));

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceStep(span: number): number {
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5]) {
    if (m * mag >= raw) {
      return m * mag;
    }
  }
  return 10 * mag;
}

function ticks(lo: number, hi: number): number[] {
  const step = niceStep(hi - lo);
  const out: number[] = [];
  for (let k = Math.ceil(lo / step - 1e-9); k * step <= hi + 1e-9 * step; k++) {
    const t = k * step;
    out.push(Math.abs(t) < 1e-12 ? 0 : t);
  }
  return out;
}

function dataRange(values: number[], pad: number): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    const d = Math.max(1, Math.abs(lo) * 0.05);
    lo -= d;
    hi += d;
  }
  const span = hi - lo;
  return [lo - pad * span, hi + pad * span];
}

export function renderSvg(fig: Figure): string {
  const allX = fig.curves.flatMap((c) => c.xs);
  const allY = fig.curves.flatMap((c) => c.ys);
  const [x0, x1] = fig.xRange ?? dataRange(allX, 0.06);
  const [y0, y1] = fig.yRange ?? dataRange(allY, 0.06);
  const sx = (v: number): number => M.left + ((v - x0) / (x1 - x0)) * (W - M.left - M.right);
  const sy = (v: number): number => H - M.bottom - ((v - y0) / (y1 - y0)) * (H - M.top - M.bottom);

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect width="${W}" height="${H}" fill="#ffffff"/>`,
  ];

  for (const t of ticks(x0, x1)) {
    const x = px(sx(t));
    parts.push(`<line x1="${x}" y1="${px(sy(y0))}" x2="${x}" y2="${px(sy(y1))}" stroke="#e6e6e6"/>`);
    parts.push(
      `<text x="${x}" y="${px(sy(y0) + 18)}" text-anchor="middle" font-family="sans-serif" font-size="12">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(y0, y1)) {
    const y = px(sy(t));
    parts.push(`<line x1="${px(sx(x0))}" y1="${y}" x2="${px(sx(x1))}" y2="${y}" stroke="#e6e6e6"/>`);
    parts.push(
      `<text x="${px(sx(x0) - 7)}" y="${px(sy(t) + 4)}" text-anchor="end" font-family="sans-serif" font-size="12">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${px(sx(x0))}" y="${px(sy(y1))}" width="${px(sx(x1) - sx(x0))}" height="${px(sy(y0) - sy(y1))}" fill="none" stroke="#333333"/>`,
  );
  parts.push(
    `<text x="${px((sx(x0) + sx(x1)) / 2)}" y="${px(H - 10)}" text-anchor="middle" font-family="sans-serif" font-size="13">${escapeXml(fig.xLabel)}</text>`,
  );
  parts.push(
    `<text transform="rotate(-90)" x="${px(-(sy(y0) + sy(y1)) / 2)}" y="16" text-anchor="middle" font-family="sans-serif" font-size="13">${escapeXml(fig.yLabel)}</text>`,
  );

  fig.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const dash = curve.kind === "dashed" ? ' stroke-dasharray="6 3"' : "";
    const pts = curve.xs.map((x, j) => `${px(sx(x))},${px(sy(curve.ys[j]))}`);
    parts.push(`<g class="curve c${i}">`);
    if (pts.length > 1) {
      parts.push(
        `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="1.5"${dash}/>`,
      );
    }
    if (curve.markers || pts.length === 1) {
      for (const p of pts) {
        const [cx, cy] = p.split(",");
        parts.push(`<circle cx="${cx}" cy="${cy}" r="3" fill="${color}"/>`);
      }
    }
    parts.push(`</g>`);
  });

  fig.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const dash = curve.kind === "dashed" ? ' stroke-dasharray="6 3"' : "";
    const ly = M.top + 12 + 16 * i;
    const lx = W - M.right - 150;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 24}" y2="${ly}" stroke="${color}" stroke-width="1.5"${dash}/>`,
    );
    parts.push(
      `<text x="${lx + 30}" y="${ly + 4}" font-family="sans-serif" font-size="12">${escapeXml(curve.label)}</text>`,
    );
  });

  parts.push(`</svg>`);
  return parts.join("\n") + "\n";
}
