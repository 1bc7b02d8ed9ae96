#!/usr/bin/env node
/** Render a harness CSV into a figure.
 *
 * Usage: recmatch-plots <input.csv> --kind sweep-grid|bar-compare --out fig.png
 * (.svg output writes the vector file directly).
 */

import { readFileSync } from 'node:fs';

import { FigureKind, buildFigureModel, writeFigure } from './render.js';
import { parseCsv } from './schema.js';

export interface CliArgs {
  input: string;
  kind: FigureKind;
  out: string;
}

export function parseArgs(argv: string[]): CliArgs {
  let input: string | undefined;
  let kind: string | undefined;
  let out: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === '--kind') kind = argv[++i];
    else if (arg === '--out') out = argv[++i];
    else if (arg.startsWith('--')) throw new Error(`unknown option ${arg}`);
    else if (input === undefined) input = arg;
    else throw new Error(`unexpected argument ${arg}`);
  }
  if (!input || !out) {
    throw new Error(
      'usage: recmatch-plots <input.csv> --kind sweep-grid|bar-compare --out fig.png',
    );
  }
  if (kind !== 'sweep-grid' && kind !== 'bar-compare') {
    throw new Error(`--kind must be sweep-grid or bar-compare, got ${kind}`);
  }
  return { input, kind, out };
}

export async function main(argv: string[]): Promise<number> {
  try {
    const args = parseArgs(argv);
    const rows = parseCsv(readFileSync(args.input, 'utf8'));
    const model = buildFigureModel(rows, args.kind);
    await writeFigure(model, args.out);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
