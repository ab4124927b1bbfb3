/**
 * TaskController: client-side state machine for one staged annotation task.
 *
 * Owns the working copy of the label sequence, the active palette brush, the
 * live validation report (fetched from the service, debounced), and the
 * submit/conflict lifecycle. It never judges label sequences itself: the only
 * client-side rule is palette filtering, everything else is the server's
 * report echoed back.
 */

import {
  ApiClient,
  StageRejectedError,
  VersionConflictError,
} from './api.js';
import {
  EMPTY_REPORT,
  STAGE_PALETTES,
  type LabelValue,
  type StoryView,
  type TaskView,
  type ValidationReportView,
} from './types.js';

export type ControllerPhase =
  | 'loading'
  | 'annotating'
  | 'submitting'
  | 'conflict'
  | 'finalized'
  | 'error';

export interface ControllerState {
  phase: ControllerPhase;
  story: StoryView | null;
  task: TaskView | null;
  /** Working labels: server labels plus edits made in the current stage. */
  labels: LabelValue[];
  /** Sentence indices locked by earlier stages (fixed skeleton). */
  locked: boolean[];
  brush: LabelValue | null;
  report: ValidationReportView;
  /** True while a debounced validate call is pending or in flight. */
  validating: boolean;
  /** SVG markup of the tension preview, refreshed on stage completion. */
  tensionSvg: string | null;
  message: string | null;
}

const REVIEW_STAGE = 5;

export class TaskController {
  private story: StoryView | null = null;
  private task: TaskView | null = null;
  private labels: LabelValue[] = [];
  private locked: boolean[] = [];
  private brush: LabelValue | null = null;
  private report: ValidationReportView = EMPTY_REPORT;
  private phase: ControllerPhase = 'loading';
  private tensionSvg: string | null = null;
  private message: string | null = null;

  private debounceHandle: ReturnType<typeof setTimeout> | null = null;
  private inflight: Promise<void> = Promise.resolve();
  private validateGeneration = 0;
  private validating = false;
  private listeners: Array<(state: ControllerState) => void> = [];

  constructor(
    private readonly api: ApiClient,
    private readonly debounceMs = 300,
  ) {}

  // -- observation ----------------------------------------------------------

  onChange(listener: (state: ControllerState) => void): void {
    this.listeners.push(listener);
  }

  getState(): ControllerState {
    return {
      phase: this.phase,
      story: this.story,
      task: this.task,
      labels: [...this.labels],
      locked: [...this.locked],
      brush: this.brush,
      report: this.report,
      validating: this.validating,
      tensionSvg: this.tensionSvg,
      message: this.message,
    };
  }

  /** Labels assignable in the current stage. */
  palette(): readonly LabelValue[] {
    if (!this.task) return [];
    return STAGE_PALETTES[this.task.current_stage] ?? [];
  }

  /** Submit is allowed only when the live report holds zero errors. */
  canSubmit(): boolean {
    return (
      this.phase === 'annotating' &&
      !this.validating &&
      this.report.errors.length === 0
    );
  }

  /** Resolves once no validation call is queued or in flight. */
  async settled(): Promise<void> {
    while (this.debounceHandle !== null || this.validating) {
      if (this.debounceHandle !== null) {
        clearTimeout(this.debounceHandle);
        this.debounceHandle = null;
        this.runValidate();
      }
      await this.inflight;
    }
  }

  private emit(): void {
    const state = this.getState();
    for (const listener of this.listeners) listener(state);
  }

  // -- lifecycle --------------------------------------------------------------

  async load(taskId: string): Promise<void> {
    this.phase = 'loading';
    this.emit();
    try {
      const task = await this.api.getTask(taskId);
      const story = await this.api.getStory(task.story_id);
      this.adoptTask(task, story);
    } catch (err) {
      this.phase = 'error';
      this.message = String(err);
      this.emit();
      throw err;
    }
  }

  private adoptTask(task: TaskView, story?: StoryView): void {
    this.task = task;
    if (story) this.story = story;
    this.labels = task.labels.map((value) => value as LabelValue);
    // Earlier stages form a fixed skeleton: anything already labeled on the
    // server cannot be repainted in this stage.
    this.locked = task.labels.map((value) => value !== 'unlabeled');
    this.report = EMPTY_REPORT;
    this.brush = this.palette()[0] ?? null;
    this.phase = task.status === 'final' ? 'finalized' : 'annotating';
    this.message = null;
    this.emit();
    if (this.phase === 'annotating') this.scheduleValidate();
  }

  // -- editing ----------------------------------------------------------------

  setBrush(label: LabelValue): void {
    if (!this.palette().includes(label)) {
      throw new Error(`label ${label} is not permitted in this stage`);
    }
    this.brush = label;
    this.emit();
  }

  /**
   * Paint the brush label onto a sentence, or clear it back to unlabeled if
   * it already carries the brush label. No-op on locked sentences.
   */
  toggleSentence(index: number): void {
    if (this.phase !== 'annotating' || this.brush === null) return;
    if (index < 0 || index >= this.labels.length) return;
    if (this.locked[index]) return;
    this.labels[index] =
      this.labels[index] === this.brush ? 'unlabeled' : this.brush;
    this.emit();
    this.scheduleValidate();
  }

  // -- live validation ----------------------------------------------------------

  private scheduleValidate(): void {
    if (this.debounceHandle !== null) clearTimeout(this.debounceHandle);
    this.validating = true;
    this.debounceHandle = setTimeout(() => {
      this.debounceHandle = null;
      this.runValidate();
    }, this.debounceMs);
    this.emit();
  }

  private runValidate(): void {
    const generation = ++this.validateGeneration;
    const snapshot = [...this.labels];
    // Stage 4 completes the annotation, so its live report uses final-mode
    // checks; earlier stages use draft mode (incomplete endings expected).
    const mode = this.task && this.task.current_stage >= 4 ? 'final' : 'draft';
    this.inflight = this.api
      .validate(snapshot, mode)
      .then((report) => {
        if (generation !== this.validateGeneration) return;
        this.report = report;
      })
      .catch((err) => {
        if (generation !== this.validateGeneration) return;
        this.message = `validation failed: ${String(err)}`;
      })
      .finally(() => {
        if (generation === this.validateGeneration) {
          this.validating = false;
          this.emit();
        }
      });
  }

  // -- submission ----------------------------------------------------------------

  /** Labels painted in this stage, keyed by sentence index. */
  stagePayload(): Record<number, string> {
    const payload: Record<number, string> = {};
    if (!this.task) return payload;
    this.labels.forEach((label, index) => {
      if (label !== this.task!.labels[index]) payload[index] = label;
    });
    return payload;
  }

  async submit(): Promise<void> {
    if (!this.task || !this.canSubmit()) return;
    const task = this.task;
    this.phase = 'submitting';
    this.emit();
    try {
      const updated = await this.api.submitStage(
        task.id,
        task.current_stage,
        task.version,
        this.stagePayload(),
      );
      this.adoptTask(updated);
      if (
        updated.status === 'final' ||
        updated.current_stage === REVIEW_STAGE
      ) {
        await this.refreshTension();
      }
    } catch (err) {
      if (err instanceof VersionConflictError) {
        this.phase = 'conflict';
        this.message = String(err.detail);
        this.emit();
        return;
      }
      if (err instanceof StageRejectedError) {
        this.phase = 'annotating';
        this.report = err.report;
        this.message = err.serverMessage;
        this.emit();
        return;
      }
      this.phase = 'annotating';
      this.message = String(err);
      this.emit();
      throw err;
    }
  }

  /**
   * Conflict recovery: reload the authoritative task and reapply the edits
   * from this stage on top of it (skipping sentences the reload locked).
   */
  async reloadAndReapply(): Promise<void> {
    if (!this.task) return;
    const edits = this.stagePayload();
    const fresh = await this.api.getTask(this.task.id);
    this.adoptTask(fresh);
    for (const [key, value] of Object.entries(edits)) {
      const index = Number(key);
      if (!this.locked[index] && this.palette().includes(value as LabelValue)) {
        this.labels[index] = value as LabelValue;
      }
    }
    this.emit();
    this.scheduleValidate();
  }

  private async refreshTension(): Promise<void> {
    if (!this.task) return;
    try {
      this.tensionSvg = await this.api.tensionSvg(
        this.task.story_id,
        this.task.annotator_id,
      );
    } catch {
      this.tensionSvg = null;
    }
    this.emit();
  }
}
