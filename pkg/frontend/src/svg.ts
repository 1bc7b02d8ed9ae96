/** Minimal deterministic SVG assembly: fixed float formatting, no state. */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  return Number(x.toFixed(3)).toString();
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === 'number' ? fmt(v) : v}"`)
    .join(' ');
  const open = parts.length > 0 ? `<${tag} ${parts}>` : `<${tag}>`;
  if (children.length === 0 && text === undefined) {
    return open.replace(/>$/, '/>');
  }
  return `${open}${text ?? ''}${children.join('')}</${tag}>`;
}

export interface LinearScale {
  (value: number): number;
  ticks: number[];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickCount = 4,
): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) =>
    r0 + ((value - d0) / span) * (r1 - r0)) as LinearScale;
  scale.ticks = niceTicks(d0, d1, tickCount);
  return scale;
}

export function niceTicks(lo: number, hi: number, count: number): number[] {
  if (hi === lo) return [lo];
  const rawStep = (hi - lo) / Math.max(1, count);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 2.5, 5, 10].map((c) => c * power);
  const step = candidates.find((c) => c >= rawStep) ?? candidates[4];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = start; t <= hi + step * 1e-9; t += step) {
    ticks.push(Number(t.toPrecision(12)));
  }
  return ticks;
}

export function tickLabel(value: number): string {
  if (Number.isInteger(value)) return value.toString();
  return Number(value.toPrecision(3)).toString();
}
