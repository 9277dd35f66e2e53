/**
 * View state lives entirely in the location hash so every view is a
 * shareable link: #/{dataset}/{composite}?vis={variable}. The composite is
 * percent-encoded (its own slashes become %2F) so it occupies exactly one
 * hash path segment.
 */

export interface ViewState {
  dataset: string;
  composite: string;
  vis?: string;
}

export function parseHash(hash: string): ViewState | null {
  if (!hash.startsWith('#/')) return null;
  let rest = hash.slice(2);
  let vis: string | undefined;
  const queryIndex = rest.indexOf('?');
  if (queryIndex >= 0) {
    const params = new URLSearchParams(rest.slice(queryIndex + 1));
    vis = params.get('vis') ?? undefined;
    rest = rest.slice(0, queryIndex);
  }
  const slash = rest.indexOf('/');
  if (slash <= 0 || slash === rest.length - 1) return null;
  const dataset = decodeURIComponent(rest.slice(0, slash));
  const composite = decodeURIComponent(rest.slice(slash + 1));
  if (!dataset || !composite) return null;
  return vis ? { dataset, composite, vis } : { dataset, composite };
}

export function formatHash(state: ViewState): string {
  const base = `#/${encodeURIComponent(state.dataset)}/${encodeURIComponent(state.composite)}`;
  return state.vis ? `${base}?vis=${encodeURIComponent(state.vis)}` : base;
}

export function readState(win: Window = window): ViewState | null {
  return parseHash(win.location.hash);
}

export function navigate(state: ViewState, win: Window = window): void {
  win.location.hash = formatHash(state);
}
