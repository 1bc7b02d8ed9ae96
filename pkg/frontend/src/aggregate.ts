/** Grouping of raw trial rows into the figure's data series. */

import { Row } from './schema.js';
import { Interval, meanCI95 } from './stats.js';

/** The three figure rows, top to bottom. */
export const METRICS = [
  { key: 'expected_matches', label: 'expected matches' },
  { key: 'envy_left', label: 'left-side envies' },
  { key: 'envy_right', label: 'right-side envies' },
] as const;

export type MetricKey = (typeof METRICS)[number]['key'];

export const METHOD_ORDER = ['uniform', 'naive', 'prod', 'iterlp', 'sw', 'nsw'];

export const METHOD_LABELS: Record<string, string> = {
  uniform: 'Uniform',
  naive: 'Naive',
  prod: 'Prod',
  iterlp: 'IterLP',
  sw: 'SW',
  nsw: 'NSW',
};

export const METHOD_COLORS: Record<string, string> = {
  uniform: '#999999',
  naive: '#1f77b4',
  prod: '#2ca02c',
  iterlp: '#9467bd',
  sw: '#d62728',
  nsw: '#ff7f0e',
};

export function orderedMethods(present: Iterable<string>): string[] {
  const set = new Set(present);
  const known = METHOD_ORDER.filter((m) => set.has(m));
  const extra = [...set].filter((m) => !METHOD_ORDER.includes(m)).sort();
  return [...known, ...extra];
}

/** One figure column: all rows sharing market size and examination kind. */
export interface CaseKey {
  n: number;
  exam: string;
}

export function caseKeys(rows: Row[]): CaseKey[] {
  const seen = new Map<string, CaseKey>();
  for (const row of rows) {
    seen.set(`${row.n}|${row.exam}`, { n: row.n, exam: row.exam });
  }
  return [...seen.values()].sort(
    (a, b) => a.n - b.n || a.exam.localeCompare(b.exam),
  );
}

export function lambdaGrid(rows: Row[]): number[] {
  return [...new Set(rows.map((r) => r.lambda))].sort((a, b) => a - b);
}

/** Per-method series over the lambda grid for one figure panel. */
export interface Series {
  method: string;
  points: { lambda: number; interval: Interval }[];
}

export function panelSeries(
  rows: Row[],
  key: CaseKey,
  metric: MetricKey,
): Series[] {
  const panelRows = rows.filter((r) => r.n === key.n && r.exam === key.exam);
  const lambdas = lambdaGrid(panelRows);
  return orderedMethods(panelRows.map((r) => r.method)).map((method) => ({
    method,
    points: lambdas.map((lambda) => {
      const values = panelRows
        .filter((r) => r.method === method && r.lambda === lambda)
        .map((r) => r[metric]);
      if (values.length === 0) {
        throw new Error(
          `no rows for method=${method} lambda=${lambda} in case n=${key.n} exam=${key.exam}`,
        );
      }
      return { lambda, interval: meanCI95(values) };
    }),
  }));
}

/** Grouped bars for the single-instance comparison figure. */
export interface BarGroup {
  exam: string;
  bars: { method: string; interval: Interval }[];
}

export function barGroups(rows: Row[], metric: MetricKey): BarGroup[] {
  const exams = [...new Set(rows.map((r) => r.exam))].sort();
  return exams.map((exam) => {
    const examRows = rows.filter((r) => r.exam === exam);
    return {
      exam,
      bars: orderedMethods(examRows.map((r) => r.method)).map((method) => ({
        method,
        interval: meanCI95(
          examRows.filter((r) => r.method === method).map((r) => r[metric]),
        ),
      })),
    };
  });
}
