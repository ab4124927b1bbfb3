/** Test doubles: an in-memory fake of the workflow service behind FetchLike. */

import type { FetchLike } from '../src/api.js';
import type {
  StoryView,
  TaskView,
  ValidationReportView,
} from '../src/types.js';

export function makeStory(texts: string[]): StoryView {
  let pos = 0;
  const sentences = texts.map((text, index) => {
    const span: [number, number] = [pos, pos + text.length];
    pos += text.length + 1;
    return { index, span, text };
  });
  return {
    id: 'story1',
    source: 'other',
    title: 'Fixture story',
    text: texts.join(' '),
    sentences,
    duplicate_of: null,
    intake: null,
  };
}

export function makeTask(
  stage: number,
  labels: string[],
  version = 1,
  status: 'draft' | 'final' = 'draft',
): TaskView {
  return {
    id: 'task1',
    story_id: 'story1',
    annotator_id: 'ann1',
    current_stage: stage,
    stage_name: `STAGE_${stage}`,
    version,
    status,
    labels,
    created_at: 0,
    updated_at: 0,
  };
}

export interface Route {
  status?: number;
  body: unknown;
}

export type RouteHandler = (requestBody: unknown) => Route;

/**
 * FetchLike backed by a "METHOD path" route table. Records every request so
 * tests can assert on payloads.
 */
export function fakeFetch(routes: Record<string, RouteHandler>): {
  fetchFn: FetchLike;
  calls: Array<{ key: string; body: unknown }>;
} {
  const calls: Array<{ key: string; body: unknown }> = [];
  const fetchFn: FetchLike = async (input, init) => {
    const key = `${init?.method ?? 'GET'} ${input}`;
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    calls.push({ key, body });
    const handler = routes[key];
    if (!handler) {
      return new Response(JSON.stringify({ detail: `no route: ${key}` }), {
        status: 404,
        headers: { 'content-type': 'application/json' },
      });
    }
    const { status = 200, body: responseBody } = handler(body);
    const payload =
      typeof responseBody === 'string'
        ? responseBody
        : JSON.stringify(responseBody);
    const contentType =
      typeof responseBody === 'string' ? 'image/svg+xml' : 'application/json';
    return new Response(payload, {
      status,
      headers: { 'content-type': contentType },
    });
  };
  return { fetchFn, calls };
}

export const OK_REPORT: ValidationReportView = { errors: [], warnings: [] };

export function e1Report(indices: number[]): ValidationReportView {
  return {
    errors: [
      {
        code: 'E1',
        sentence_indices: indices,
        message: 'multiple most-reportable-event runs',
      },
    ],
    warnings: [],
  };
}

/** Counts contiguous runs of a target label; used only to fake the server. */
export function runCount(labels: string[], target: string): number {
  let runs = 0;
  let inRun = false;
  for (const label of labels) {
    if (label === target && !inRun) runs += 1;
    inRun = label === target;
  }
  return runs;
}
