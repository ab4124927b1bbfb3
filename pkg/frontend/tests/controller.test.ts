import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { TaskController } from '../src/controller.js';
import {
  OK_REPORT,
  e1Report,
  fakeFetch,
  makeStory,
  makeTask,
  runCount,
  type RouteHandler,
} from './helpers.js';

const TEXTS = ['One.', 'Two.', 'Three.', 'Four.', 'Five.', 'Six.'];
const UNLABELED = TEXTS.map(() => 'unlabeled');

function validateByRuns(): RouteHandler {
  return (body) => {
    const { labels } = body as { labels: string[] };
    const runs = runCount(labels, 'most_reportable_event');
    return { body: runs > 1 ? e1Report([]) : OK_REPORT };
  };
}

async function loadedController(
  routes: Record<string, RouteHandler>,
): Promise<{ controller: TaskController; calls: ReturnType<typeof fakeFetch>['calls'] }> {
  const { fetchFn, calls } = fakeFetch({
    'GET /tasks/task1': () => ({ body: makeTask(1, UNLABELED) }),
    'GET /stories/story1': () => ({ body: makeStory(TEXTS) }),
    'POST /annotations/validate': validateByRuns(),
    ...routes,
  });
  const controller = new TaskController(new ApiClient('', fetchFn), 0);
  await controller.load('task1');
  await controller.settled();
  return { controller, calls };
}

describe('palette filtering', () => {
  it('stage 1 permits only the MRE label', async () => {
    const { controller } = await loadedController({});
    expect(controller.palette()).toEqual(['most_reportable_event']);
    expect(() => controller.setBrush('orientation')).toThrow(/not permitted/);
  });

  it('later stages expose their own palettes', async () => {
    const { controller } = await loadedController({
      'GET /tasks/task1': () => ({ body: makeTask(3, UNLABELED) }),
    });
    expect(controller.palette()).toEqual(['resolution', 'minor_resolution']);
  });
});

describe('live validation gates Submit', () => {
  it('a seeded E1 (two MRE runs) disables Submit until repaired', async () => {
    const { controller } = await loadedController({});
    controller.toggleSentence(1);
    controller.toggleSentence(3); // second run, separated by sentence 2
    await controller.settled();
    expect(controller.getState().report.errors[0]?.code).toBe('E1');
    expect(controller.canSubmit()).toBe(false);

    controller.toggleSentence(3); // repaint back to unlabeled
    await controller.settled();
    expect(controller.getState().report.errors).toHaveLength(0);
    expect(controller.canSubmit()).toBe(true);
  });

  it('stale responses never overwrite newer reports', async () => {
    const { controller } = await loadedController({});
    controller.toggleSentence(1);
    controller.toggleSentence(3);
    controller.toggleSentence(3);
    await controller.settled();
    expect(controller.canSubmit()).toBe(true);
  });
});

describe('stage submission', () => {
  it('sends only this stage’s edits and adopts the advanced task', async () => {
    const advanced = [...UNLABELED];
    advanced[2] = 'most_reportable_event';
    const { controller, calls } = await loadedController({
      'POST /tasks/task1/stages/1': () => ({
        body: makeTask(2, advanced, 2),
      }),
    });
    controller.toggleSentence(2);
    await controller.settled();
    await controller.submit();

    const submitCall = calls.find((c) => c.key === 'POST /tasks/task1/stages/1');
    expect(submitCall?.body).toEqual({
      version: 1,
      labels: { 2: 'most_reportable_event' },
    });
    const state = controller.getState();
    expect(state.task?.current_stage).toBe(2);
    expect(controller.palette()).toEqual(['complicating_action']);
    // earlier-stage labels become a fixed skeleton
    expect(state.locked[2]).toBe(true);
    controller.setBrush('complicating_action');
    controller.toggleSentence(2);
    expect(controller.getState().labels[2]).toBe('most_reportable_event');
  });

  it('surfaces a server-side rejection report verbatim', async () => {
    const { controller } = await loadedController({
      'POST /tasks/task1/stages/1': () => ({
        status: 400,
        body: {
          detail: { message: 'validation errors: E1', report: e1Report([1, 3]) },
        },
      }),
    });
    controller.toggleSentence(1);
    await controller.settled();
    // client-side report is clean; the server still rejects
    expect(controller.canSubmit()).toBe(true);
    await controller.submit();
    const state = controller.getState();
    expect(state.phase).toBe('annotating');
    expect(state.report.errors[0]?.code).toBe('E1');
    expect(state.message).toContain('E1');
  });
});

describe('version conflicts', () => {
  it('stale submit opens the conflict path, reload reapplies edits', async () => {
    const serverLabels = [...UNLABELED];
    serverLabels[4] = 'most_reportable_event';
    const { controller } = await loadedController({
      'POST /tasks/task1/stages/1': () => ({
        status: 409,
        body: { detail: 'stale version 1, task is at 3' },
      }),
      'GET /tasks/task1': (() => {
        let first = true;
        return () => {
          if (first) {
            first = false;
            return { body: makeTask(1, UNLABELED) };
          }
          return { body: makeTask(1, serverLabels, 3) };
        };
      })(),
    });
    controller.toggleSentence(1);
    await controller.settled();
    await controller.submit();
    expect(controller.getState().phase).toBe('conflict');

    await controller.reloadAndReapply();
    await controller.settled();
    const state = controller.getState();
    expect(state.task?.version).toBe(3);
    expect(state.labels[1]).toBe('most_reportable_event'); // my edit kept
    expect(state.labels[4]).toBe('most_reportable_event'); // theirs adopted
    expect(state.locked[4]).toBe(true);
  });
});

describe('tension preview', () => {
  it('refreshes only once the task finalizes', async () => {
    const done = [...UNLABELED];
    done[2] = 'most_reportable_event';
    const { controller, calls } = await loadedController({
      'GET /tasks/task1': () => ({ body: makeTask(4, done, 4) }),
      'POST /tasks/task1/stages/4': () => ({
        body: makeTask(5, done, 5, 'final'),
      }),
      'GET /stories/story1/tension?annotator=ann1&format=svg': () => ({
        body: '<svg xmlns="http://www.w3.org/2000/svg"></svg>',
      }),
    });
    controller.setBrush('orientation');
    controller.toggleSentence(0);
    await controller.settled();
    expect(controller.getState().tensionSvg).toBeNull();
    await controller.submit();
    expect(controller.getState().phase).toBe('finalized');
    expect(controller.getState().tensionSvg).toContain('<svg');
    expect(
      calls.filter((c) => c.key.startsWith('GET /stories/story1/tension')),
    ).toHaveLength(1);
  });
});
