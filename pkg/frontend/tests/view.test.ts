// @vitest-environment happy-dom
import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { TaskController } from '../src/controller.js';
import { TaskView } from '../src/view.js';
import {
  OK_REPORT,
  e1Report,
  fakeFetch,
  makeStory,
  makeTask,
  runCount,
} from './helpers.js';

const TEXTS = ['One.', 'Two.', 'Three.', 'Four.', 'Five.'];
const UNLABELED = TEXTS.map(() => 'unlabeled');

async function mounted() {
  const { fetchFn } = fakeFetch({
    'GET /tasks/task1': () => ({ body: makeTask(1, UNLABELED) }),
    'GET /stories/story1': () => ({ body: makeStory(TEXTS) }),
    'POST /annotations/validate': (body) => {
      const { labels } = body as { labels: string[] };
      const runs = runCount(labels, 'most_reportable_event');
      return { body: runs > 1 ? e1Report([1, 3]) : OK_REPORT };
    },
  });
  const controller = new TaskController(new ApiClient('', fetchFn), 0);
  const root = document.createElement('div');
  document.body.appendChild(root);
  new TaskView(root, controller);
  await controller.load('task1');
  await controller.settled();
  return { controller, root };
}

function submitButton(root: HTMLElement): HTMLButtonElement {
  const button = root.querySelector<HTMLButtonElement>('button.submit');
  if (!button) throw new Error('no submit button rendered');
  return button;
}

describe('TaskView', () => {
  it('renders every sentence with a visible label and the stage palette', async () => {
    const { root } = await mounted();
    const items = root.querySelectorAll('li.sentence');
    expect(items).toHaveLength(5);
    items.forEach((item) => {
      expect(item.querySelector('.sentence-label')?.textContent).toBe(
        'Unlabeled',
      );
    });
    const palette = Array.from(
      root.querySelectorAll<HTMLElement>('.palette-label'),
    ).map((b) => b.dataset.label);
    expect(palette).toEqual(['most_reportable_event']);
  });

  it('disables Submit while a seeded E1 exists and marks the offending runs', async () => {
    const { controller, root } = await mounted();
    expect(submitButton(root).disabled).toBe(false);

    controller.toggleSentence(1);
    controller.toggleSentence(3);
    await controller.settled();
    expect(submitButton(root).disabled).toBe(true);
    const issue = root.querySelector<HTMLElement>('.issue-error');
    expect(issue?.dataset.code).toBe('E1');
    expect(root.querySelectorAll('li.sentence.has-error')).toHaveLength(2);

    controller.toggleSentence(3);
    await controller.settled();
    expect(submitButton(root).disabled).toBe(false);
    expect(root.querySelector('.issue-error')).toBeNull();
  });

  it('paints labels through clicks on sentences', async () => {
    const { root } = await mounted();
    const second = root.querySelectorAll<HTMLElement>('li.sentence')[1];
    second.click();
    const repainted = root.querySelectorAll<HTMLElement>('li.sentence')[1];
    expect(repainted.dataset.label).toBe('most_reportable_event');
    expect(repainted.querySelector('.sentence-label')?.textContent).toBe(
      'Most Reportable Event',
    );
  });
});
