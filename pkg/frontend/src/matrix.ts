/**
 * Composite-query matrix view: an n-by-n percent grid plus, per part, the
 * Focus / Hide / Split refinement links. Refined composites come verbatim
 * from the server response; the client only turns them into view URLs.
 */

import { MatrixPayload } from './api.js';
import { ViewState, formatHash } from './state.js';

/** Monotone blue scale: 0% white, 100% saturated. */
export function cellColor(percent: number): string {
  const lightness = 97 - percent * 0.55;
  return `hsl(215, 65%, ${lightness}%)`;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderMatrix(payload: MatrixPayload, view: ViewState): HTMLElement {
  const container = el('div', 'matrix');
  const table = el('table', 'matrix-grid');
  container.appendChild(table);

  const head = el('tr');
  head.appendChild(el('th'));
  payload.parts.forEach((part, i) => {
    const th = el('th', 'matrix-col', `q${i + 1}`);
    th.title = part;
    head.appendChild(th);
  });
  table.appendChild(head);

  payload.percents.forEach((row, i) => {
    const tr = el('tr');
    const label = el('th', 'matrix-row');
    label.appendChild(el('span', 'part-name', payload.parts[i]));
    tr.appendChild(label);
    row.forEach((percent, j) => {
      const td = el('td', i === j ? 'cell diagonal' : 'cell', `${percent}%`);
      td.style.backgroundColor = cellColor(percent);
      td.title = `${payload.cells[i]?.[j]} objects`;
      tr.appendChild(td);
    });
    table.appendChild(tr);
  });

  const refinements = payload.refinements ?? [];
  if (refinements.length > 0) {
    const list = el('ul', 'refinements');
    refinements.forEach((refinement) => {
      const item = el('li');
      item.appendChild(
        el('span', 'part-name', payload.parts[refinement.part - 1] ?? `q${refinement.part}`),
      );
      (['focus', 'hide', 'split'] as const).forEach((op) => {
        const link = el('a', `refine refine-${op}`, op);
        link.setAttribute(
          'href',
          formatHash({ ...view, composite: refinement[op].composite }),
        );
        link.dataset.part = String(refinement.part);
        link.dataset.op = op;
        item.appendChild(document.createTextNode(' '));
        item.appendChild(link);
      });
      list.appendChild(item);
    });
    container.appendChild(list);
  }
  return container;
}
