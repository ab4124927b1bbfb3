"""Staged annotation task engine: stage progression, gold-standard diffs,
and seeded overlap assignment for agreement studies.

The staged procedure mirrors how annotators work: find the MRE first, then
complicating actions against it, then the resolution, then everything else,
then review. Each stage only permits its own labels, which keeps the
cognitive load of a single step small.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Mapping, Optional, Sequence

from .corpus import Annotation, Story
from .labels import Label
from .validator import ValidationReport, validate


class WorkflowError(ValueError):
    pass


class StaleVersionError(WorkflowError):
    pass


class StageValidationError(WorkflowError):
    def __init__(self, report: ValidationReport):
        super().__init__("validation errors: "
                         + ", ".join(i.code for i in report.errors))
        self.report = report


class Stage(IntEnum):
    READ_AND_MARK_MRE = 1
    MARK_COMPLICATING_ACTIONS = 2
    MARK_RESOLUTION = 3
    MARK_REMAINING = 4
    REVIEW = 5


# Labels an annotator may assign at each submitting stage. Stage 3 includes
# Minor Resolution alongside Resolution since both resolve tension.
STAGE_LABELS: dict[Stage, frozenset[Label]] = {
    Stage.READ_AND_MARK_MRE: frozenset({Label.MOST_REPORTABLE_EVENT}),
    Stage.MARK_COMPLICATING_ACTIONS: frozenset({Label.COMPLICATING_ACTION}),
    Stage.MARK_RESOLUTION: frozenset({Label.RESOLUTION, Label.MINOR_RESOLUTION}),
    Stage.MARK_REMAINING: frozenset({
        Label.ABSTRACT, Label.ORIENTATION, Label.AFTERMATH, Label.EVALUATION,
        Label.DIRECT_COMMENT, Label.RETURN_OF_MRE, Label.UNLABELED,
    }),
}


@dataclass(frozen=True)
class Task:
    id: str
    story_id: str
    annotator_id: str
    current_stage: Stage
    draft: Annotation
    created_at: float
    updated_at: float

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "story_id": self.story_id,
            "annotator_id": self.annotator_id,
            "current_stage": int(self.current_stage),
            "stage_name": self.current_stage.name,
            "version": self.draft.version,
            "status": self.draft.status,
            "labels": [lab.value for lab in self.draft.labels],
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }


def new_task(task_id: str, story: Story, annotator_id: str) -> Task:
    draft = Annotation(
        story_id=story.id,
        annotator_id=annotator_id,
        status="draft",
        version=1,
        labels=tuple([Label.UNLABELED] * story.sentence_count),
    )
    now = time.time()
    return Task(id=task_id, story_id=story.id, annotator_id=annotator_id,
                current_stage=Stage.READ_AND_MARK_MRE, draft=draft,
                created_at=now, updated_at=now)


def submit_stage(task: Task, stage: int, payload: Mapping[int, Label],
                 version: int) -> tuple[Task, ValidationReport]:
    """Merge a stage's partial label assignments into the draft and advance.

    The payload may only use labels permitted at the current stage; a stale
    version is rejected, never merged. Completing the last labeling stage
    enters Review, which requires zero hard errors and finalizes the draft.
    """
    if task.current_stage == Stage.REVIEW:
        raise WorkflowError(f"task {task.id} is already in review")
    if stage != int(task.current_stage):
        raise WorkflowError(f"task {task.id} is at stage {int(task.current_stage)}, "
                            f"got submission for stage {stage}")
    if version != task.draft.version:
        raise StaleVersionError(
            f"task {task.id}: stale version {version} (current {task.draft.version})")

    allowed = STAGE_LABELS[task.current_stage]
    labels = list(task.draft.labels)
    for index, label in payload.items():
        if not (0 <= index < len(labels)):
            raise WorkflowError(f"sentence index {index} out of range")
        if label not in allowed:
            raise WorkflowError(
                f"label {label.value!r} is not permitted at stage "
                f"{task.current_stage.name}")
        labels[index] = label

    next_stage = Stage(int(task.current_stage) + 1)
    finalizing = next_stage == Stage.REVIEW
    report = validate(labels, status="final" if finalizing else "draft")
    if report.errors:
        raise StageValidationError(report)

    draft = task.draft.bump(labels=tuple(labels),
                            status="final" if finalizing else "draft")
    updated = replace(task, current_stage=next_stage, draft=draft,
                      updated_at=time.time())
    return updated, report


def reopen_task(task: Task, version: int) -> Task:
    """Review -> stage 1 with a version bump, for post-feedback correction."""
    if task.current_stage != Stage.REVIEW:
        raise WorkflowError(f"task {task.id} is not in review")
    if version != task.draft.version:
        raise StaleVersionError(
            f"task {task.id}: stale version {version} (current {task.draft.version})")
    draft = task.draft.bump(status="draft")
    return replace(task, current_stage=Stage.READ_AND_MARK_MRE, draft=draft,
                   updated_at=time.time())


# ---------------------------------------------------------------------------
# Training diffs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffReport:
    story_id: str
    entries: tuple[dict, ...]  # {index, submitted, gold}
    agreement_fraction: float
    mismatch_count: int

    def to_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "entries": list(self.entries),
            "agreement_fraction": self.agreement_fraction,
            "mismatch_count": self.mismatch_count,
        }


def training_diff(submitted: Annotation, gold: Annotation) -> DiffReport:
    if submitted.story_id != gold.story_id:
        raise WorkflowError(f"gold annotation is for story {gold.story_id!r}, "
                            f"submission is for {submitted.story_id!r}")
    if len(submitted.labels) != len(gold.labels):
        raise WorkflowError("submitted and gold annotations differ in sentence count")
    entries = tuple(
        {"index": i, "submitted": s.value, "gold": g.value}
        for i, (s, g) in enumerate(zip(submitted.labels, gold.labels))
    )
    matches = sum(1 for e in entries if e["submitted"] == e["gold"])
    n = len(entries)
    return DiffReport(
        story_id=submitted.story_id,
        entries=entries,
        agreement_fraction=matches / n if n else 1.0,
        mismatch_count=n - matches,
    )


# ---------------------------------------------------------------------------
# Overlap assignment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OverlapPlan:
    shared: tuple[str, ...]              # every annotator labels these
    solo: dict[str, tuple[str, ...]]     # annotator id -> exclusive stories
    seed: int

    def to_dict(self) -> dict:
        return {"shared": list(self.shared),
                "solo": {aid: list(sids) for aid, sids in self.solo.items()},
                "seed": self.seed}


def assign_overlap(story_ids: Sequence[str], annotator_ids: Sequence[str],
                   shared_count: int, seed: int) -> OverlapPlan:
    """Seeded deterministic plan: a shared block for agreement computation,
    the remainder split round-robin so no solo story gets two annotators."""
    if shared_count > len(story_ids):
        raise WorkflowError(f"shared_count {shared_count} exceeds "
                            f"{len(story_ids)} stories")
    if len(annotator_ids) < 2:
        raise WorkflowError("overlap assignment needs at least 2 annotators")
    if len(set(story_ids)) != len(story_ids):
        raise WorkflowError("duplicate story ids in plan request")
    order = list(story_ids)
    random.Random(seed).shuffle(order)
    shared = tuple(order[:shared_count])
    solo: dict[str, list[str]] = {aid: [] for aid in annotator_ids}
    for i, sid in enumerate(order[shared_count:]):
        solo[annotator_ids[i % len(annotator_ids)]].append(sid)
    return OverlapPlan(shared=shared,
                       solo={aid: tuple(sids) for aid, sids in solo.items()},
                       seed=seed)
