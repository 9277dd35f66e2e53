/**
 * SVG renderings of variable summaries: descending bar chart for
 * categorical variables, histogram with a box-plot toggle for numerical
 * ones.
 */

import { SummaryPayload } from './api.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const WIDTH = 560;
const BAR_HEIGHT = 22;
const HIST_HEIGHT = 180;

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export function renderBarChart(counts: [string, number][]): SVGSVGElement {
  const max = Math.max(...counts.map(([, c]) => c), 1);
  const labelWidth = 180;
  const svg = svgEl('svg', {
    width: WIDTH,
    height: counts.length * (BAR_HEIGHT + 4),
    class: 'bar-chart',
  });
  counts.forEach(([value, count], i) => {
    const y = i * (BAR_HEIGHT + 4);
    const bar = svgEl('rect', {
      x: labelWidth,
      y,
      width: ((WIDTH - labelWidth - 60) * count) / max,
      height: BAR_HEIGHT,
      class: 'bar',
    });
    bar.dataset.value = value;
    bar.dataset.count = String(count);
    svg.appendChild(bar);
    const label = svgEl('text', {
      x: labelWidth - 6,
      y: y + BAR_HEIGHT * 0.75,
      'text-anchor': 'end',
      class: 'bar-label',
    });
    label.textContent = value;
    svg.appendChild(label);
    const amount = svgEl('text', {
      x: labelWidth + 4 + ((WIDTH - labelWidth - 60) * count) / max,
      y: y + BAR_HEIGHT * 0.75,
      class: 'bar-count',
    });
    amount.textContent = String(count);
    svg.appendChild(amount);
  });
  return svg;
}

export function renderHistogram(bins: [number, number, number][]): SVGSVGElement {
  const max = Math.max(...bins.map(([, , c]) => c), 1);
  const barWidth = WIDTH / Math.max(bins.length, 1);
  const svg = svgEl('svg', { width: WIDTH, height: HIST_HEIGHT + 20, class: 'histogram' });
  bins.forEach(([lo, hi, count], i) => {
    const h = (HIST_HEIGHT * count) / max;
    const rect = svgEl('rect', {
      x: i * barWidth + 1,
      y: HIST_HEIGHT - h,
      width: barWidth - 2,
      height: h,
      class: 'hist-bin',
    });
    rect.dataset.count = String(count);
    const title = document.createElementNS(SVG_NS, 'title');
    title.textContent = `[${lo.toFixed(2)}, ${hi.toFixed(2)}): ${count}`;
    rect.appendChild(title);
    svg.appendChild(rect);
  });
  return svg;
}

export function renderBoxPlot(summary: SummaryPayload): SVGSVGElement {
  const box = summary.box!;
  const svg = svgEl('svg', { width: WIDTH, height: 110, class: 'box-plot' });
  const pad = 40;
  const span = box.max - box.min || 1;
  const x = (v: number) => pad + ((WIDTH - 2 * pad) * (v - box.min)) / span;
  const mid = 50;
  svg.appendChild(svgEl('line', { x1: x(box.min), x2: x(box.q1), y1: mid, y2: mid, class: 'whisker' }));
  svg.appendChild(svgEl('line', { x1: x(box.q3), x2: x(box.max), y1: mid, y2: mid, class: 'whisker' }));
  svg.appendChild(
    svgEl('rect', {
      x: x(box.q1),
      y: mid - 22,
      width: Math.max(x(box.q3) - x(box.q1), 1),
      height: 44,
      class: 'quartile-box',
    }),
  );
  svg.appendChild(
    svgEl('line', { x1: x(box.median), x2: x(box.median), y1: mid - 22, y2: mid + 22, class: 'median' }),
  );
  for (const [name, value] of Object.entries({
    min: box.min, q1: box.q1, median: box.median, q3: box.q3, max: box.max,
  })) {
    const label = svgEl('text', { x: x(value), y: 100, 'text-anchor': 'middle', class: 'box-label' });
    label.textContent = `${name}=${Number(value.toFixed(3))}`;
    svg.appendChild(label);
  }
  return svg;
}

/** Chart panel for a selection's variable summary. */
export function renderSummary(summary: SummaryPayload, selectionSize: number): HTMLElement {
  const panel = document.createElement('div');
  panel.className = 'summary';
  const heading = document.createElement('h3');
  heading.textContent = `${summary.variable} (${selectionSize} objects)`;
  panel.appendChild(heading);

  if (selectionSize === 0) {
    const empty = document.createElement('p');
    empty.className = 'empty-state';
    empty.textContent = '0 objects selected';
    panel.appendChild(empty);
    return panel;
  }

  if (summary.kind === 'categorical') {
    panel.appendChild(renderBarChart(summary.counts ?? []));
    return panel;
  }

  const holder = document.createElement('div');
  const toggle = document.createElement('button');
  toggle.className = 'chart-toggle';
  let showingBox = false;
  const draw = () => {
    holder.replaceChildren(
      showingBox ? renderBoxPlot(summary) : renderHistogram(summary.bins ?? []),
    );
    toggle.textContent = showingBox ? 'show histogram' : 'show box plot';
  };
  toggle.addEventListener('click', () => {
    showingBox = !showingBox;
    draw();
  });
  draw();
  panel.appendChild(toggle);
  panel.appendChild(holder);
  return panel;
}
