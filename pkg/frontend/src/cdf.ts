/** Empirical distribution helpers for the CDF figures. */

export interface StepFn {
  /** jump locations, strictly increasing */
  xs: number[];
  /** cumulative probability at and after each jump; last entry is 1 */
  ps: number[];
}

export function empiricalCdf(samples: number[]): StepFn {
  if (samples.length === 0) {
    throw new Error("empirical CDF needs at least one sample");
  }
  const sorted = [...samples].sort((a, b) => a - b);
  const xs: number[] = [];
  const counts: number[] = [];
  for (const v of sorted) {
    if (xs.length > 0 && xs[xs.length - 1] === v) {
      counts[counts.length - 1] += 1;
    } else {
      xs.push(v);
      counts.push(1);
    }
  }
  let acc = 0;
  const ps = counts.map((c) => (acc += c) / sorted.length);
  return { xs, ps };
}

/**
 * Vertices of the right-continuous step curve over [xlo, xhi]: flat at 0
 * before the first jump, flat at 1 after the last. A one-sample CDF comes
 * out as a single unit step.
 */
export function stepPolyline(cdf: StepFn, xlo: number, xhi: number): { xs: number[]; ys: number[] } {
  const xs = [xlo];
  const ys = [0];
  for (let i = 0; i < cdf.xs.length; i++) {
    xs.push(cdf.xs[i], cdf.xs[i]);
    ys.push(ys[ys.length - 1], cdf.ps[i]);
  }
  xs.push(xhi);
  ys.push(cdf.ps[cdf.ps.length - 1]);
  return { xs, ys };
}
