/** Figure construction: a data model first, then its SVG, then PNG bytes.
 *
 * Keeping the plotted numbers in the model lets tests verify them against an
 * independent aggregation without scraping pixel output.
 */

import { writeFileSync } from 'node:fs';

import {
  BarGroup,
  CaseKey,
  METHOD_COLORS,
  METHOD_LABELS,
  METRICS,
  MetricKey,
  Series,
  barGroups,
  caseKeys,
  orderedMethods,
  panelSeries,
} from './aggregate.js';
import { Row } from './schema.js';
import { el, linearScale, tickLabel } from './svg.js';

export type FigureKind = 'sweep-grid' | 'bar-compare';

export interface SweepPanel {
  metric: MetricKey;
  caseKey: CaseKey;
  series: Series[];
}

export interface BarPanel {
  metric: MetricKey;
  groups: BarGroup[];
}

export interface FigureModel {
  kind: FigureKind;
  methods: string[];
  sweepPanels?: SweepPanel[][]; // [metric row][case column]
  barPanels?: BarPanel[];
}

const PANEL_W = 220;
const PANEL_H = 150;
const MARGIN = { left: 64, right: 20, top: 56, bottom: 46 };
const GAP = { x: 20, y: 26 };

export function buildFigureModel(rows: Row[], kind: FigureKind): FigureModel {
  if (rows.length === 0) throw new Error('no data rows to plot');
  const methods = orderedMethods(rows.map((r) => r.method));
  if (kind === 'sweep-grid') {
    const cases = caseKeys(rows);
    const sweepPanels = METRICS.map((metric) =>
      cases.map((caseKey) => ({
        metric: metric.key,
        caseKey,
        series: panelSeries(rows, caseKey, metric.key),
      })),
    );
    return { kind, methods, sweepPanels };
  }
  if (kind === 'bar-compare') {
    const barPanels = METRICS.map((metric) => ({
      metric: metric.key,
      groups: barGroups(rows, metric.key),
    }));
    return { kind, methods, barPanels };
  }
  throw new Error(`unknown figure kind ${kind as string}`);
}

export function figureSvg(model: FigureModel): string {
  return model.kind === 'sweep-grid' ? sweepSvg(model) : barSvg(model);
}

function legend(methods: string[], width: number): string {
  const entryW = 78;
  const x0 = Math.max(8, (width - methods.length * entryW) / 2);
  const items = methods.map((method, i) => {
    const x = x0 + i * entryW;
    return (
      el('rect', {
        x,
        y: 14,
        width: 12,
        height: 12,
        fill: METHOD_COLORS[method] ?? '#333333',
      }) +
      el(
        'text',
        { x: x + 16, y: 24, 'font-size': 12, fill: '#222' },
        [],
        METHOD_LABELS[method] ?? method,
      )
    );
  });
  return items.join('');
}

function panelFrame(
  x: number,
  y: number,
  title: string,
  yLabel: string,
): string {
  return (
    el('rect', {
      x,
      y,
      width: PANEL_W,
      height: PANEL_H,
      fill: 'none',
      stroke: '#444',
      'stroke-width': 1,
    }) +
    el(
      'text',
      {
        x: x + PANEL_W / 2,
        y: y - 6,
        'font-size': 11,
        'text-anchor': 'middle',
        fill: '#222',
      },
      [],
      title,
    ) +
    el(
      'text',
      {
        x: x - 44,
        y: y + PANEL_H / 2,
        'font-size': 11,
        fill: '#222',
        transform: `rotate(-90 ${x - 44} ${y + PANEL_H / 2})`,
        'text-anchor': 'middle',
      },
      [],
      yLabel,
    )
  );
}

function sweepSvg(model: FigureModel): string {
  const panels = model.sweepPanels!;
  const nCols = panels[0].length;
  const width = MARGIN.left + nCols * (PANEL_W + GAP.x) - GAP.x + MARGIN.right;
  const height =
    MARGIN.top + panels.length * (PANEL_H + GAP.y) - GAP.y + MARGIN.bottom;
  const body: string[] = [legend(model.methods, width)];

  panels.forEach((row, metricIdx) => {
    const metricLabel = METRICS[metricIdx].label;
    row.forEach((panel, caseIdx) => {
      const x0 = MARGIN.left + caseIdx * (PANEL_W + GAP.x);
      const y0 = MARGIN.top + metricIdx * (PANEL_H + GAP.y);
      const lambdas = panel.series[0].points.map((p) => p.lambda);
      const hi = Math.max(
        1e-9,
        ...panel.series.flatMap((s) => s.points.map((p) => p.interval.upper)),
      );
      const sx = linearScale(
        [Math.min(...lambdas), Math.max(...lambdas)],
        [x0 + 6, x0 + PANEL_W - 6],
      );
      const sy = linearScale([0, hi * 1.05], [y0 + PANEL_H - 4, y0 + 4]);
      const title =
        metricIdx === 0
          ? `n=${panel.caseKey.n} (${panel.caseKey.exam})`
          : '';
      body.push(
        panelFrame(x0, y0, title, caseIdx === 0 ? metricLabel : ''),
      );
      for (const t of sy.ticks) {
        body.push(
          el('line', {
            x1: x0,
            x2: x0 + 4,
            y1: sy(t),
            y2: sy(t),
            stroke: '#444',
          }),
          el(
            'text',
            {
              x: x0 - 4,
              y: sy(t) + 3,
              'font-size': 9,
              'text-anchor': 'end',
              fill: '#222',
            },
            [],
            tickLabel(t),
          ),
        );
      }
      for (const lambda of lambdas) {
        body.push(
          el('line', {
            x1: sx(lambda),
            x2: sx(lambda),
            y1: y0 + PANEL_H,
            y2: y0 + PANEL_H - 4,
            stroke: '#444',
          }),
        );
        if (metricIdx === panels.length - 1) {
          body.push(
            el(
              'text',
              {
                x: sx(lambda),
                y: y0 + PANEL_H + 12,
                'font-size': 9,
                'text-anchor': 'middle',
                fill: '#222',
              },
              [],
              tickLabel(lambda),
            ),
          );
        }
      }
      if (metricIdx === panels.length - 1) {
        body.push(
          el(
            'text',
            {
              x: x0 + PANEL_W / 2,
              y: y0 + PANEL_H + 28,
              'font-size': 11,
              'text-anchor': 'middle',
              fill: '#222',
            },
            [],
            'lambda',
          ),
        );
      }
      for (const series of panel.series) {
        const color = METHOD_COLORS[series.method] ?? '#333333';
        const upper = series.points
          .map((p) => `${sx(p.lambda)},${sy(p.interval.upper)}`)
          .join(' ');
        const lower = series.points
          .slice()
          .reverse()
          .map((p) => `${sx(p.lambda)},${sy(Math.max(0, p.interval.lower))}`)
          .join(' ');
        body.push(
          el('polygon', {
            points: `${upper} ${lower}`,
            fill: color,
            'fill-opacity': '0.18',
            stroke: 'none',
            class: `band band-${series.method}`,
          }),
          el('polyline', {
            points: series.points
              .map((p) => `${sx(p.lambda)},${sy(p.interval.mean)}`)
              .join(' '),
            fill: 'none',
            stroke: color,
            'stroke-width': 1.6,
            class: `line line-${series.method}`,
          }),
        );
        for (const p of series.points) {
          body.push(
            el('circle', {
              cx: sx(p.lambda),
              cy: sy(p.interval.mean),
              r: 2.2,
              fill: color,
              class: `pt pt-${series.method}`,
            }),
          );
        }
      }
    });
  });
  return wrap(width, height, body);
}

function barSvg(model: FigureModel): string {
  const panels = model.barPanels!;
  const width = MARGIN.left + panels.length * (PANEL_W + GAP.x) - GAP.x + MARGIN.right;
  const height = MARGIN.top + PANEL_H + MARGIN.bottom;
  const body: string[] = [legend(model.methods, width)];

  panels.forEach((panel, panelIdx) => {
    const x0 = MARGIN.left + panelIdx * (PANEL_W + GAP.x);
    const y0 = MARGIN.top;
    const metricLabel = METRICS[panelIdx].label;
    const hi = Math.max(
      1e-9,
      ...panel.groups.flatMap((g) => g.bars.map((b) => b.interval.upper)),
    );
    const sy = linearScale([0, hi * 1.05], [y0 + PANEL_H - 4, y0 + 4]);
    body.push(panelFrame(x0, y0, metricLabel, panelIdx === 0 ? 'value' : ''));
    for (const t of sy.ticks) {
      body.push(
        el('line', {
          x1: x0,
          x2: x0 + 4,
          y1: sy(t),
          y2: sy(t),
          stroke: '#444',
        }),
        el(
          'text',
          {
            x: x0 - 4,
            y: sy(t) + 3,
            'font-size': 9,
            'text-anchor': 'end',
            fill: '#222',
          },
          [],
          tickLabel(t),
        ),
      );
    }
    const groupW = PANEL_W / Math.max(1, panel.groups.length);
    panel.groups.forEach((group, gi) => {
      const barW = (groupW * 0.84) / Math.max(1, group.bars.length);
      group.bars.forEach((bar, bi) => {
        const bx = x0 + gi * groupW + groupW * 0.08 + bi * barW;
        const by = sy(bar.interval.mean);
        body.push(
          el('rect', {
            x: bx,
            y: by,
            width: barW * 0.92,
            height: Math.max(0, y0 + PANEL_H - 4 - by),
            fill: METHOD_COLORS[bar.method] ?? '#333333',
            class: `bar bar-${bar.method}`,
          }),
        );
      });
      body.push(
        el(
          'text',
          {
            x: x0 + gi * groupW + groupW / 2,
            y: y0 + PANEL_H + 14,
            'font-size': 10,
            'text-anchor': 'middle',
            fill: '#222',
          },
          [],
          group.exam,
        ),
      );
    });
  });
  return wrap(width, height, body);
}

function wrap(width: number, height: number, body: string[]): string {
  return el(
    'svg',
    {
      xmlns: 'http://www.w3.org/2000/svg',
      width,
      height,
      'font-family': 'Helvetica, Arial, sans-serif',
    },
    [
      el('rect', { x: 0, y: 0, width, height, fill: 'white' }),
      ...body,
    ],
  );
}

export async function writeFigure(
  model: FigureModel,
  outPath: string,
): Promise<void> {
  const svg = figureSvg(model);
  if (outPath.endsWith('.svg')) {
    writeFileSync(outPath, svg);
    return;
  }
  const { Resvg } = await import('@resvg/resvg-js');
  const png = new Resvg(svg).render().asPng();
  writeFileSync(outPath, png);
}
