/**
 * Entry point: read ?task=<id> (and optional ?api=<base>) from the URL and
 * mount the annotator UI.
 */

import { ApiClient } from './api.js';
import { TaskController } from './controller.js';
import { TaskView } from './view.js';

export function mount(root: HTMLElement): TaskController {
  const params = new URLSearchParams(window.location.search);
  const base = params.get('api') ?? '';
  const taskId = params.get('task');
  const controller = new TaskController(new ApiClient(base));
  new TaskView(root, controller);
  if (taskId) {
    void controller.load(taskId);
  } else {
    root.textContent = 'Missing ?task=<task id> in the URL.';
  }
  return controller;
}

if (typeof document !== 'undefined') {
  const root = document.getElementById('app');
  if (root) mount(root);
}
