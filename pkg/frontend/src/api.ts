/**
 * Typed client for the heapscope JSON API. The UI consumes only these
 * endpoints; it never evaluates queries on its own.
 */

export interface DatasetManifest {
  name: string;
  objectCount: number;
  eventCount: number;
  classCount: number;
  ingestedAt: string;
}

export interface BoxStats {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

export interface SummaryPayload {
  variable: string;
  kind: 'categorical' | 'numerical';
  counts?: [string, number][];
  bins?: [number, number, number][];
  box?: BoxStats | null;
}

export interface SelectionPayload {
  dataset: string;
  query: string;
  canonicalQuery: string;
  count: number;
  objects: number[];
  truncated: boolean;
  fromCache: boolean;
  computeMillis: number;
  summary?: SummaryPayload;
}

export interface RefinementTarget {
  composite: string;
  url: string;
}

export interface Refinement {
  part: number;
  focus: RefinementTarget;
  hide: RefinementTarget;
  split: RefinementTarget;
}

export interface MatrixPayload {
  dataset: string;
  composite: string;
  parts: string[];
  universeSize: number;
  cells: number[][];
  percents: number[][];
  cellUrls: string[][];
  refinements?: Refinement[];
}

export class ApiError extends Error {
  code: string;
  status: number;
  offset?: number;

  constructor(status: number, code: string, message: string, offset?: number) {
    super(message);
    this.status = status;
    this.code = code;
    this.offset = offset;
  }
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) {
    let code = 'http-error';
    let message = `${response.status} ${response.statusText}`;
    let offset: number | undefined;
    try {
      const body = await response.json();
      if (body && body.code) {
        code = body.code;
        message = body.message;
        offset = body.offset;
      }
    } catch {
      // non-JSON error body, keep the status line
    }
    throw new ApiError(response.status, code, message, offset);
  }
  return (await response.json()) as T;
}

/** Encode one path segment, keeping parens readable but escaping "/" as %2F. */
export function encodeQueryPath(text: string): string {
  return encodeURIComponent(text);
}

export function fetchDatasets(): Promise<DatasetManifest[]> {
  return getJson('/datasets');
}

export function fetchMatrix(dataset: string, composite: string): Promise<MatrixPayload> {
  return getJson(`/json/${encodeURIComponent(dataset)}/matrix/${encodeQueryPath(composite)}`);
}

export function fetchSelection(
  dataset: string,
  query: string,
  vis?: string,
): Promise<SelectionPayload> {
  const suffix = vis ? `?vis=${encodeURIComponent(vis)}` : '';
  return getJson(
    `/json/${encodeURIComponent(dataset)}/query/${encodeQueryPath(query)}${suffix}`,
  );
}
