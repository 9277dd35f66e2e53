import { describe, expect, it } from 'vitest';

import type { SelectionPayload, SummaryPayload } from '../src/api.js';
import { renderBarChart, renderSummary } from '../src/charts.js';
import objKlass from './fixtures/query-obj-klass.json';
import objLifetime from './fixtures/query-obj-lifetime.json';

describe('renderBarChart', () => {
  it('draws one proportional bar per value', () => {
    const svg = renderBarChart([
      ['A', 2],
      ['B', 1],
    ]);
    const bars = svg.querySelectorAll('rect.bar');
    expect(bars).toHaveLength(2);
    const widths = [...bars].map((b) => Number(b.getAttribute('width')));
    expect(widths[0]).toBeGreaterThan(0);
    expect(widths[0]).toBe(2 * (widths[1] ?? 0));
  });
});

describe('renderSummary', () => {
  it('renders equal bars for the two golden-trace classes', () => {
    const payload = objKlass as SelectionPayload;
    const node = renderSummary(payload.summary!, payload.count);
    const bars = node.querySelectorAll('rect.bar');
    expect([...bars].map((b) => (b as SVGRectElement).dataset.value)).toEqual(['A', 'B']);
    const widths = [...bars].map((b) => b.getAttribute('width'));
    expect(widths[0]).toBe(widths[1]);
  });

  it('shows an explicit empty state for empty selections', () => {
    const summary: SummaryPayload = { variable: 'klass', kind: 'categorical', counts: [] };
    const node = renderSummary(summary, 0);
    expect(node.querySelector('.empty-state')?.textContent).toBe('0 objects selected');
    expect(node.querySelectorAll('rect.bar')).toHaveLength(0);
  });

  it('renders 20 histogram bins and toggles to a labeled box plot', () => {
    const payload = objLifetime as SelectionPayload;
    const node = renderSummary(payload.summary!, payload.count);
    expect(node.querySelectorAll('rect.hist-bin')).toHaveLength(20);
    const toggle = node.querySelector<HTMLButtonElement>('button.chart-toggle');
    expect(toggle?.textContent).toBe('show box plot');
    toggle?.click();
    expect(node.querySelectorAll('.box-plot')).toHaveLength(1);
    const labels = [...node.querySelectorAll('.box-label')].map((l) => l.textContent ?? '');
    for (const stat of ['min=', 'q1=', 'median=', 'q3=', 'max=']) {
      expect(labels.some((text) => text.startsWith(stat))).toBe(true);
    }
    toggle?.click();
    expect(node.querySelectorAll('rect.hist-bin')).toHaveLength(20);
  });
});
