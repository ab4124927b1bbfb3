/**
 * Shared types for the annotator UI: the 11-label schema, stage palettes,
 * and the JSON shapes exchanged with the workflow service.
 *
 * The UI performs no validation of its own beyond palette filtering; every
 * error/warning judgment comes from the service.
 */

export const LABELS = [
  'unlabeled',
  'abstract',
  'orientation',
  'complicating_action',
  'most_reportable_event',
  'resolution',
  'aftermath',
  'evaluation',
  'return_of_mre',
  'minor_resolution',
  'direct_comment',
] as const;

export type LabelValue = (typeof LABELS)[number];

export const LABEL_DISPLAY: Record<LabelValue, string> = {
  unlabeled: 'Unlabeled',
  abstract: 'Abstract',
  orientation: 'Orientation',
  complicating_action: 'Complicating Action',
  most_reportable_event: 'Most Reportable Event',
  resolution: 'Resolution',
  aftermath: 'Aftermath',
  evaluation: 'Evaluation',
  return_of_mre: 'Return of MRE',
  minor_resolution: 'Minor Resolution',
  direct_comment: 'Direct Comment',
};

export const STAGE_NAMES: Record<number, string> = {
  1: 'Read & mark the Most Reportable Event',
  2: 'Mark Complicating Actions',
  3: 'Mark Resolutions',
  4: 'Mark remaining labels',
  5: 'Review',
};

/**
 * Labels assignable at each submitting stage. Mirrors the server's stage
 * preconditions; the server remains the authority and will reject anything
 * outside this set regardless.
 */
export const STAGE_PALETTES: Record<number, readonly LabelValue[]> = {
  1: ['most_reportable_event'],
  2: ['complicating_action'],
  3: ['resolution', 'minor_resolution'],
  4: [
    'abstract',
    'orientation',
    'aftermath',
    'evaluation',
    'direct_comment',
    'return_of_mre',
    'unlabeled',
  ],
  5: [],
};

export function isLabelValue(value: string): value is LabelValue {
  return (LABELS as readonly string[]).includes(value);
}

// ---------------------------------------------------------------------------
// Wire formats
// ---------------------------------------------------------------------------

export interface SentenceView {
  index: number;
  span: [number, number];
  text: string;
}

export interface IntakeView {
  accepted: boolean;
  word_count: number;
  dialogue_count: number;
  reasons: string[];
}

export interface StoryView {
  id: string;
  source: string;
  title: string | null;
  text: string;
  sentences: SentenceView[];
  duplicate_of: string | null;
  intake: IntakeView | null;
}

export interface TaskView {
  id: string;
  story_id: string;
  annotator_id: string;
  current_stage: number;
  stage_name: string;
  version: number;
  status: 'draft' | 'final';
  labels: string[];
  created_at: number;
  updated_at: number;
}

export interface IssueView {
  code: string;
  sentence_indices: number[];
  message: string;
}

export interface ValidationReportView {
  errors: IssueView[];
  warnings: IssueView[];
}

export const EMPTY_REPORT: ValidationReportView = { errors: [], warnings: [] };
