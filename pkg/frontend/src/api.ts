/**
 * Thin typed client for the workflow service. Every method maps 1:1 onto an
 * HTTP endpoint; no client-side state beyond the base URL.
 */

import type {
  StoryView,
  TaskView,
  ValidationReportView,
} from './types.js';

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Non-2xx response from the service. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(typeof detail === 'string' ? detail : JSON.stringify(detail));
    this.name = 'ApiError';
  }
}

/** 409 from a stage submission: the task moved under us. */
export class VersionConflictError extends ApiError {
  constructor(detail: unknown) {
    super(409, detail);
    this.name = 'VersionConflictError';
  }
}

/** 400 from a stage submission carrying a structured validation report. */
export class StageRejectedError extends ApiError {
  constructor(
    public readonly report: ValidationReportView,
    public readonly serverMessage: string,
  ) {
    super(400, serverMessage);
    this.name = 'StageRejectedError';
  }
}

async function readDetail(resp: Response): Promise<unknown> {
  try {
    const body = (await resp.json()) as { detail?: unknown };
    return body.detail ?? body;
  } catch {
    return resp.statusText;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    private readonly token?: string,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const headers: Record<string, string> = {
      'Content-Type': 'application/json',
      ...(init?.headers as Record<string, string> | undefined),
    };
    if (this.token !== undefined) {
      headers['Authorization'] = `Bearer ${this.token}`;
    }
    const resp = await this.fetchFn(this.baseUrl + path, { ...init, headers });
    if (!resp.ok) {
      throw new ApiError(resp.status, await readDetail(resp));
    }
    return resp;
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.request(path);
    return (await resp.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.request(path, {
      method: 'POST',
      body: JSON.stringify(body),
    });
    return (await resp.json()) as T;
  }

  getStory(storyId: string): Promise<StoryView> {
    return this.getJson(`/stories/${encodeURIComponent(storyId)}`);
  }

  createStory(body: {
    id?: string;
    source: string;
    title?: string;
    text: string;
    flags: {
      has_mre: boolean;
      single_story: boolean;
      non_narrative_below_half: boolean;
      offensive: boolean;
    };
  }): Promise<StoryView> {
    return this.postJson('/stories', body);
  }

  createTask(storyId: string, annotatorId: string): Promise<TaskView> {
    return this.postJson('/tasks', {
      story_id: storyId,
      annotator_id: annotatorId,
    });
  }

  getTask(taskId: string): Promise<TaskView> {
    return this.getJson(`/tasks/${encodeURIComponent(taskId)}`);
  }

  /**
   * Submit one stage. Raises VersionConflictError on staleness and
   * StageRejectedError (with the server's report) on validation failure.
   */
  async submitStage(
    taskId: string,
    stage: number,
    version: number,
    labels: Record<number, string>,
  ): Promise<TaskView> {
    const path = `/tasks/${encodeURIComponent(taskId)}/stages/${stage}`;
    try {
      return await this.postJson<TaskView>(path, { version, labels });
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        throw new VersionConflictError(err.detail);
      }
      if (err instanceof ApiError && err.status === 400) {
        const detail = err.detail as {
          message?: string;
          report?: ValidationReportView;
        };
        if (detail && typeof detail === 'object' && detail.report) {
          throw new StageRejectedError(
            detail.report,
            detail.message ?? 'stage rejected',
          );
        }
      }
      throw err;
    }
  }

  reopenTask(taskId: string, version: number): Promise<TaskView> {
    return this.postJson(`/tasks/${encodeURIComponent(taskId)}/reopen`, {
      version,
      labels: {},
    });
  }

  validate(
    labels: string[],
    status: 'draft' | 'final' = 'final',
  ): Promise<ValidationReportView> {
    return this.postJson('/annotations/validate', { labels, status });
  }

  async tensionSvg(storyId: string, annotatorId: string): Promise<string> {
    const path =
      `/stories/${encodeURIComponent(storyId)}/tension` +
      `?annotator=${encodeURIComponent(annotatorId)}&format=svg`;
    const resp = await this.request(path);
    return resp.text();
  }
}
