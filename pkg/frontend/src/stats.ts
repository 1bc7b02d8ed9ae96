/** Mean and normal-approximation confidence intervals over trial values. */

export function mean(values: number[]): number {
  if (values.length === 0) throw new Error('mean of empty sample');
  return values.reduce((a, b) => a + b, 0) / values.length;
}

export function sampleStd(values: number[]): number {
  if (values.length < 2) return 0;
  const m = mean(values);
  const ss = values.reduce((acc, v) => acc + (v - m) ** 2, 0);
  return Math.sqrt(ss / (values.length - 1));
}

export interface Interval {
  mean: number;
  lower: number;
  upper: number;
}

/** 95% CI as mean +/- 1.96 * sd / sqrt(n); degenerate for n < 2. */
export function meanCI95(values: number[]): Interval {
  const m = mean(values);
  const margin = 1.96 * (sampleStd(values) / Math.sqrt(values.length));
  return { mean: m, lower: m - margin, upper: m + margin };
}
