/**
 * Application shell. The location hash is the single source of view state:
 * every render reads it, every interaction just changes it, so browser
 * history replays any exploration session.
 */

import { ApiError, fetchDatasets, fetchMatrix, fetchSelection } from './api.js';
import { renderSummary } from './charts.js';
import { renderMatrix } from './matrix.js';
import { ViewState, formatHash, readState } from './state.js';

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderError(error: unknown): HTMLElement {
  const box = el('div', 'error');
  if (error instanceof ApiError) {
    box.textContent = `${error.code}: ${error.message}`;
    if (error.offset !== undefined) {
      box.textContent += ` (offset ${error.offset})`;
    }
  } else {
    box.textContent = String(error);
  }
  return box;
}

async function renderLanding(root: HTMLElement): Promise<void> {
  const page = el('div', 'landing');
  page.appendChild(el('h1', undefined, 'heapscope explorer'));
  try {
    const manifests = await fetchDatasets();
    if (manifests.length === 0) {
      page.appendChild(el('p', 'empty-state', 'no datasets ingested yet'));
    }
    const list = el('ul', 'dataset-list');
    for (const manifest of manifests) {
      const item = el('li');
      const link = el('a', 'dataset-link', manifest.name) as HTMLAnchorElement;
      link.href = formatHash({ dataset: manifest.name, composite: 'Obj()' });
      item.appendChild(link);
      item.appendChild(
        el(
          'span',
          'dataset-meta',
          ` ${manifest.objectCount} objects, ${manifest.eventCount} events`,
        ),
      );
      list.appendChild(item);
    }
    page.appendChild(list);
  } catch (error) {
    page.appendChild(renderError(error));
  }
  root.replaceChildren(page);
}

function queryForm(view: ViewState): HTMLElement {
  const form = el('form', 'query-form') as HTMLFormElement;
  const input = el('input', 'query-input') as HTMLInputElement;
  input.value = view.composite;
  input.name = 'composite';
  const visInput = el('input', 'vis-input') as HTMLInputElement;
  visInput.value = view.vis ?? '';
  visInput.name = 'vis';
  visInput.placeholder = 'vis variable';
  const go = el('button', undefined, 'run') as HTMLButtonElement;
  go.type = 'submit';
  form.append(input, visInput, go);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    window.location.hash = formatHash({
      dataset: view.dataset,
      composite: input.value,
      vis: visInput.value || undefined,
    });
  });
  return form;
}

async function renderView(root: HTMLElement, view: ViewState): Promise<void> {
  const page = el('div', 'view');
  const title = el('h1');
  const home = el('a', 'home-link', 'heapscope') as HTMLAnchorElement;
  home.href = '#';
  title.appendChild(home);
  title.appendChild(document.createTextNode(` / ${view.dataset}`));
  page.appendChild(title);
  page.appendChild(queryForm(view));

  try {
    const stats = await fetchMatrix(view.dataset, view.composite);
    page.appendChild(renderMatrix(stats, view));
    if (view.vis) {
      const firstPart = stats.parts[0];
      if (firstPart !== undefined) {
        const selection = await fetchSelection(view.dataset, firstPart, view.vis);
        if (selection.summary) {
          page.appendChild(renderSummary(selection.summary, selection.count));
        }
      }
    }
  } catch (error) {
    page.appendChild(renderError(error));
  }
  root.replaceChildren(page);
}

export async function renderCurrent(root: HTMLElement): Promise<void> {
  const view = readState();
  if (view === null) {
    await renderLanding(root);
  } else {
    await renderView(root, view);
  }
}

/** Mount the app on `root` and re-render on every hash change. */
export function initApp(root: HTMLElement): Promise<void> {
  window.addEventListener('hashchange', () => {
    void renderCurrent(root);
  });
  return renderCurrent(root);
}
