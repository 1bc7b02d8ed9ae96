/** Parsing and validation of the experiment harness CSV. */

export const REQUIRED_COLUMNS = [
  'method',
  'n',
  'm',
  'lambda',
  'exam',
  'trial',
  'expected_matches',
  'envy_left',
  'envy_right',
  'max_envy_left',
  'max_envy_right',
  'runtime_ms',
  'seed',
] as const;

export interface Row {
  method: string;
  n: number;
  m: number;
  lambda: number;
  exam: string;
  trial: number;
  expected_matches: number;
  envy_left: number;
  envy_right: number;
  max_envy_left: number;
  max_envy_right: number;
  runtime_ms: number;
  seed: number;
}

const NUMERIC: ReadonlySet<string> = new Set([
  'n',
  'm',
  'lambda',
  'trial',
  'expected_matches',
  'envy_left',
  'envy_right',
  'max_envy_left',
  'max_envy_right',
  'runtime_ms',
  'seed',
]);

/** Parse harness CSV text; throws naming the first missing column. */
export function parseCsv(text: string): Row[] {
  const lines = text.trim().split('\n');
  if (lines.length === 0 || lines[0] === '') {
    throw new Error('empty CSV');
  }
  const header = lines[0].split(',');
  for (const column of REQUIRED_COLUMNS) {
    if (!header.includes(column)) {
      throw new Error(`missing column ${column}`);
    }
  }
  if (lines.length < 2) {
    throw new Error('CSV has a header but no data rows');
  }
  const rows: Row[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(',');
    if (parts.length !== header.length) {
      throw new Error(`row ${i} has ${parts.length} fields, expected ${header.length}`);
    }
    const record: Record<string, string | number> = {};
    header.forEach((column, idx) => {
      record[column] = NUMERIC.has(column) ? Number(parts[idx]) : parts[idx];
    });
    rows.push(record as unknown as Row);
  }
  return rows;
}
