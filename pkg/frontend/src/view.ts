/**
 * DOM view for a TaskController. Renders the story as selectable sentences,
 * the stage-filtered label palette, the live validation report, the Submit
 * control (disabled while errors exist), the conflict dialog, and the
 * tension-curve preview.
 */

import type { TaskController, ControllerState } from './controller.js';
import {
  LABEL_DISPLAY,
  STAGE_NAMES,
  type IssueView,
  type LabelValue,
} from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class TaskView {
  constructor(
    private readonly container: HTMLElement,
    private readonly controller: TaskController,
  ) {
    controller.onChange((state) => this.render(state));
  }

  render(state: ControllerState): void {
    const doc = this.container.ownerDocument;
    this.container.textContent = '';
    this.container.appendChild(this.renderHeader(doc, state));
    if (state.phase === 'loading') {
      this.container.appendChild(el(doc, 'p', 'status', 'Loading task…'));
      return;
    }
    if (state.phase === 'error') {
      this.container.appendChild(
        el(doc, 'p', 'status status-error', state.message ?? 'Load failed.'),
      );
      const retry = el(doc, 'button', 'retry', 'Retry');
      retry.addEventListener('click', () => {
        if (state.task) void this.controller.load(state.task.id);
      });
      this.container.appendChild(retry);
      return;
    }
    if (state.phase === 'conflict') {
      this.container.appendChild(this.renderConflict(doc, state));
      return;
    }
    this.container.appendChild(this.renderPalette(doc, state));
    this.container.appendChild(this.renderSentences(doc, state));
    this.container.appendChild(this.renderReport(doc, state));
    this.container.appendChild(this.renderSubmit(doc, state));
    if (state.tensionSvg) {
      const preview = el(doc, 'div', 'tension-preview');
      preview.innerHTML = state.tensionSvg;
      this.container.appendChild(preview);
    }
  }

  private renderHeader(doc: Document, state: ControllerState): HTMLElement {
    const header = el(doc, 'header', 'task-header');
    const title = state.story?.title || state.story?.id || 'Annotation task';
    header.appendChild(el(doc, 'h1', 'story-title', title));
    if (state.task) {
      const stage = state.task.current_stage;
      header.appendChild(
        el(
          doc,
          'h2',
          'stage-name',
          state.phase === 'finalized'
            ? 'Finalized'
            : `Stage ${stage}: ${STAGE_NAMES[stage] ?? state.task.stage_name}`,
        ),
      );
    }
    if (state.message && state.phase === 'annotating') {
      header.appendChild(el(doc, 'p', 'status status-error', state.message));
    }
    return header;
  }

  private renderPalette(doc: Document, state: ControllerState): HTMLElement {
    const palette = el(doc, 'div', 'palette');
    palette.setAttribute('role', 'radiogroup');
    for (const label of this.controller.palette()) {
      const button = el(
        doc,
        'button',
        label === state.brush ? 'palette-label active' : 'palette-label',
        LABEL_DISPLAY[label],
      );
      button.dataset.label = label;
      button.addEventListener('click', () => this.controller.setBrush(label));
      palette.appendChild(button);
    }
    return palette;
  }

  private renderSentences(doc: Document, state: ControllerState): HTMLElement {
    const list = el(doc, 'ol', 'sentences');
    const errorIndices = new Set<number>(
      state.report.errors.flatMap((issue) => issue.sentence_indices),
    );
    state.story?.sentences.forEach((sentence) => {
      const item = el(doc, 'li', 'sentence');
      const label = state.labels[sentence.index] as LabelValue;
      item.dataset.index = String(sentence.index);
      item.dataset.label = label;
      if (state.locked[sentence.index]) item.classList.add('locked');
      if (errorIndices.has(sentence.index)) item.classList.add('has-error');
      item.appendChild(el(doc, 'span', 'sentence-text', sentence.text));
      // every sentence shows its label, including Unlabeled: no hidden state
      item.appendChild(el(doc, 'span', 'sentence-label', LABEL_DISPLAY[label]));
      item.addEventListener('click', () =>
        this.controller.toggleSentence(sentence.index),
      );
      list.appendChild(item);
    });
    return list;
  }

  private renderIssue(doc: Document, issue: IssueView, cls: string): HTMLElement {
    const item = el(doc, 'li', cls);
    item.dataset.code = issue.code;
    item.textContent = `${issue.code}: ${issue.message}`;
    return item;
  }

  private renderReport(doc: Document, state: ControllerState): HTMLElement {
    const panel = el(doc, 'div', 'report');
    if (state.validating) {
      panel.appendChild(el(doc, 'p', 'status', 'Checking…'));
    }
    const issues = el(doc, 'ul', 'issues');
    for (const issue of state.report.errors) {
      issues.appendChild(this.renderIssue(doc, issue, 'issue issue-error'));
    }
    for (const issue of state.report.warnings) {
      issues.appendChild(this.renderIssue(doc, issue, 'issue issue-warning'));
    }
    panel.appendChild(issues);
    return panel;
  }

  private renderSubmit(doc: Document, state: ControllerState): HTMLElement {
    const bar = el(doc, 'div', 'submit-bar');
    const submit = el(doc, 'button', 'submit', 'Submit stage');
    submit.disabled = !this.controller.canSubmit();
    submit.addEventListener('click', () => void this.controller.submit());
    bar.appendChild(submit);
    if (state.phase === 'finalized') {
      submit.textContent = 'Finalized';
    }
    return bar;
  }

  private renderConflict(doc: Document, state: ControllerState): HTMLElement {
    const dialog = el(doc, 'div', 'conflict-dialog');
    dialog.appendChild(
      el(
        doc,
        'p',
        'status status-error',
        `This task changed on the server: ${state.message ?? 'version conflict'}`,
      ),
    );
    const reload = el(doc, 'button', 'reload', 'Reload and reapply my edits');
    reload.addEventListener('click', () =>
      void this.controller.reloadAndReapply(),
    );
    dialog.appendChild(reload);
    return dialog;
  }
}
