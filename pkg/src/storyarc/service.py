"""HTTP+JSON annotation service.

State lives in a Store guarded by one lock; writes to a (story, annotator)
record go through version compare-and-set, so concurrent annotators cannot
silently overwrite each other. When a data directory is configured, stories,
annotations, and tasks are written through to flat JSONL files.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request, Response
from pydantic import BaseModel, Field

from . import corpus as corpus_io
from .agreement import (AgreementError, MERGE_PRESETS, MergeMap, RawConfusionMatrix,
                        aligned_sequences, build_confusion, cohen_kappa, confusion_csv,
                        normalize_confusion, pairwise_report)
from .corpus import Annotation, Annotator, CorpusError, Story
from .intake import IntakeDecision, IntakeError, IntakeFlags, evaluate_intake
from .labels import Label, UnknownLabelError
from .segmenter import SegmentationError, segment
from .tension import TensionError, export_curve, tension_curve
from .validator import validate
from .workflow import (StageValidationError, StaleVersionError, Task, WorkflowError,
                       assign_overlap, new_task, reopen_task, submit_stage,
                       training_diff)


class Store:
    """In-memory state with optional JSONL write-through."""

    def __init__(self, data_dir: Optional[str] = None):
        self._lock = threading.Lock()
        self.stories: dict[str, Story] = {}
        self.intake: dict[str, IntakeDecision] = {}
        self.annotations: dict[tuple[str, str], Annotation] = {}
        self.tasks: dict[str, Task] = {}
        self.annotators: dict[str, Annotator] = {}
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load()

    # -- persistence -------------------------------------------------------

    def _load(self) -> None:
        stories_path = self.data_dir / "stories.jsonl"
        if stories_path.exists():
            for story in corpus_io.load_corpus(stories_path):
                self.stories[story.id] = story
        ann_path = self.data_dir / "annotations.jsonl"
        if ann_path.exists():
            for ann in corpus_io.load_annotations(ann_path, list(self.stories.values())):
                self.annotations[(ann.story_id, ann.annotator_id)] = ann
        intake_path = self.data_dir / "intake.jsonl"
        if intake_path.exists():
            with open(intake_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        self.intake[rec["story_id"]] = IntakeDecision(
                            accepted=rec["accepted"],
                            word_count=rec["word_count"],
                            dialogue_line_count=rec["dialogue_line_count"],
                            reasons=tuple(rec["reasons"]))

    def _persist(self) -> None:
        if not self.data_dir:
            return
        corpus_io.save_corpus(list(self.stories.values()),
                              self.data_dir / "stories.jsonl")
        corpus_io.save_annotations(list(self.annotations.values()),
                                   self.data_dir / "annotations.jsonl")
        with open(self.data_dir / "intake.jsonl", "w", encoding="utf-8") as fh:
            for sid, decision in self.intake.items():
                rec = {"story_id": sid, **decision.to_dict()}
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")

    # -- mutations (all under the lock) -------------------------------------

    def add_story(self, story: Story, decision: IntakeDecision) -> None:
        with self._lock:
            if story.id in self.stories:
                raise CorpusError(f"duplicate story id {story.id!r}")
            self.stories[story.id] = story
            self.intake[story.id] = decision
            self._persist()

    def create_task(self, story_id: str, annotator_id: str) -> Task:
        with self._lock:
            story = self.stories.get(story_id)
            if story is None:
                raise KeyError(story_id)
            decision = self.intake.get(story_id)
            if decision is not None and not decision.accepted:
                raise WorkflowError(
                    f"story {story_id} failed intake: {', '.join(decision.reasons)}")
            for task in self.tasks.values():
                if (task.story_id, task.annotator_id) == (story_id, annotator_id) \
                        and task.draft.status == "draft":
                    raise WorkflowError(
                        f"active task already exists for ({story_id}, {annotator_id})")
            task = new_task(uuid.uuid4().hex[:12], story, annotator_id)
            self.tasks[task.id] = task
            self.annotators.setdefault(annotator_id, Annotator(id=annotator_id))
            return task

    def submit_stage(self, task_id: str, stage: int, payload: dict[int, Label],
                     version: int):
        with self._lock:
            task = self.tasks.get(task_id)
            if task is None:
                raise KeyError(task_id)
            updated, report = submit_stage(task, stage, payload, version)
            self.tasks[task_id] = updated
            if updated.draft.status == "final":
                self.annotations[(updated.story_id, updated.annotator_id)] = updated.draft
                self._persist()
            return updated, report

    def reopen(self, task_id: str, version: int) -> Task:
        with self._lock:
            task = self.tasks.get(task_id)
            if task is None:
                raise KeyError(task_id)
            updated = reopen_task(task, version)
            self.tasks[task_id] = updated
            self.annotations.pop((task.story_id, task.annotator_id), None)
            self._persist()
            return updated

    def put_annotation(self, ann: Annotation) -> None:
        """Direct write with optimistic version check and final validation."""
        with self._lock:
            story = self.stories.get(ann.story_id)
            if story is None:
                raise KeyError(ann.story_id)
            ann.check_story(story)
            existing = self.annotations.get((ann.story_id, ann.annotator_id))
            if existing is not None and ann.version <= existing.version:
                raise StaleVersionError(
                    f"version {ann.version} is not newer than stored {existing.version}")
            if ann.status == "final":
                report = validate(ann.labels, status="final")
                if report.errors:
                    raise StageValidationError(report)
            self.annotations[(ann.story_id, ann.annotator_id)] = ann
            self._persist()

    def register_annotator(self, annotator: Annotator) -> None:
        with self._lock:
            self.annotators[annotator.id] = annotator


# ---------------------------------------------------------------------------
# Request bodies
# ---------------------------------------------------------------------------

class FlagsIn(BaseModel):
    has_mre: bool
    single_story: bool
    non_narrative_below_half: bool
    offensive: bool


class StoryIn(BaseModel):
    id: Optional[str] = None
    source: str = "other"
    title: Optional[str] = None
    text: str
    duplicate_of: Optional[str] = None
    flags: FlagsIn


class TaskIn(BaseModel):
    story_id: str
    annotator_id: str


class StageIn(BaseModel):
    version: int
    labels: dict[int, str] = Field(default_factory=dict)


class ValidateIn(BaseModel):
    labels: list[str]
    status: str = "final"


class AnnotationIn(BaseModel):
    story_id: str
    annotator_id: str
    status: str = "final"
    version: int = 1
    labels: list[str]


class AnnotatorIn(BaseModel):
    id: str
    role: str = "annotator"


class OverlapIn(BaseModel):
    story_ids: list[str]
    annotator_ids: list[str]
    k: int
    seed: int = 0


class DiffIn(BaseModel):
    submitted: AnnotationIn
    gold_story_id: str


def _story_json(store: Store, story: Story) -> dict:
    rec = corpus_io.story_to_record(story)
    rec["sentences"] = [{"index": s.index, "span": list(s.span), "text": s.text}
                       for s in story.sentences]
    decision = store.intake.get(story.id)
    rec["intake"] = decision.to_dict() if decision else None
    return rec


def create_app(store: Optional[Store] = None,
               tokens: Optional[dict[str, str]] = None) -> FastAPI:
    """Build the service. `tokens` maps annotator id -> static bearer token;
    when provided, task mutations require the matching Authorization header.
    """
    app = FastAPI(title="storyarc")
    app.state.store = store = store or Store()

    def check_token(request: Request, annotator_id: str) -> None:
        if not tokens:
            return
        expected = tokens.get(annotator_id)
        header = request.headers.get("authorization", "")
        if expected is None or header != f"Bearer {expected}":
            raise HTTPException(status_code=401,
                                detail=f"invalid token for annotator {annotator_id!r}")

    # -- stories -----------------------------------------------------------

    @app.post("/stories", status_code=201)
    def post_story(body: StoryIn):
        try:
            sentences = segment(body.text)
            story = Story(
                id=body.id or uuid.uuid4().hex[:12],
                source=body.source,
                title=body.title,
                text=body.text,
                sentences=tuple(sentences),
                duplicate_of=body.duplicate_of,
            )
            flags = IntakeFlags(**body.flags.model_dump())
            decision = evaluate_intake(story, flags)
            store.add_story(story, decision)
        except (SegmentationError, IntakeError, CorpusError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _story_json(store, story)

    @app.get("/stories")
    def list_stories():
        return [_story_json(store, s) for s in store.stories.values()]

    @app.get("/stories/{story_id}")
    def get_story(story_id: str):
        story = store.stories.get(story_id)
        if story is None:
            raise HTTPException(status_code=404, detail=f"unknown story {story_id!r}")
        return _story_json(store, story)

    # -- tasks ---------------------------------------------------------------

    @app.post("/tasks", status_code=201)
    def post_task(body: TaskIn, request: Request):
        check_token(request, body.annotator_id)
        try:
            task = store.create_task(body.story_id, body.annotator_id)
        except KeyError:
            raise HTTPException(status_code=404,
                                detail=f"unknown story {body.story_id!r}")
        except WorkflowError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return task.to_dict()

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str):
        task = store.tasks.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"unknown task {task_id!r}")
        return task.to_dict()

    @app.post("/tasks/{task_id}/stages/{stage}")
    def post_stage(task_id: str, stage: int, body: StageIn, request: Request):
        task = store.tasks.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"unknown task {task_id!r}")
        check_token(request, task.annotator_id)
        try:
            payload = {int(i): Label.parse(v) for i, v in body.labels.items()}
            updated, report = store.submit_stage(task_id, stage, payload, body.version)
        except UnknownLabelError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except StaleVersionError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except StageValidationError as exc:
            raise HTTPException(status_code=400,
                                detail={"message": "validation failed",
                                        "report": exc.report.to_dict()})
        except WorkflowError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        out = updated.to_dict()
        out["report"] = report.to_dict()
        return out

    @app.post("/tasks/{task_id}/reopen")
    def post_reopen(task_id: str, body: StageIn, request: Request):
        task = store.tasks.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"unknown task {task_id!r}")
        check_token(request, task.annotator_id)
        try:
            return store.reopen(task_id, body.version).to_dict()
        except StaleVersionError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except WorkflowError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    # -- annotations ---------------------------------------------------------

    @app.post("/annotations/validate")
    def post_validate(body: ValidateIn):
        try:
            return validate(body.labels, status=body.status).to_dict()
        except (UnknownLabelError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/annotations", status_code=201)
    def post_annotation(body: AnnotationIn, request: Request):
        check_token(request, body.annotator_id)
        try:
            ann = Annotation(story_id=body.story_id, annotator_id=body.annotator_id,
                             status=body.status, version=body.version,
                             labels=tuple(Label.parse(v) for v in body.labels))
            store.put_annotation(ann)
        except KeyError:
            raise HTTPException(status_code=404,
                                detail=f"unknown story {body.story_id!r}")
        except StaleVersionError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except StageValidationError as exc:
            raise HTTPException(status_code=400,
                                detail={"message": "validation failed",
                                        "report": exc.report.to_dict()})
        except (UnknownLabelError, CorpusError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return corpus_io.annotation_to_record(ann)

    @app.post("/annotators", status_code=201)
    def post_annotator(body: AnnotatorIn):
        try:
            annotator = Annotator(id=body.id, role=body.role)
        except CorpusError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        store.register_annotator(annotator)
        return {"id": annotator.id, "role": annotator.role}

    # -- metrics ---------------------------------------------------------------

    def _resolve_merge(merge: Optional[str]) -> Optional[MergeMap]:
        if merge is None:
            return None
        preset = MERGE_PRESETS.get(merge)
        if preset is None:
            raise HTTPException(status_code=400, detail=f"unknown merge preset {merge!r}")
        return preset()

    @app.get("/metrics/agreement")
    def get_agreement(a: str, b: str, merge: Optional[str] = None):
        merge_map = _resolve_merge(merge)
        try:
            reports = pairwise_report(list(store.annotations.values()),
                                      pairs=[(a, b)], merge=merge_map)
        except AgreementError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return reports[0].to_dict()

    @app.get("/metrics/confusion")
    def get_confusion(format: str = "csv", a: Optional[str] = None,
                      b: Optional[str] = None, normalized: bool = True):
        annotations = list(store.annotations.values())
        annotators = sorted({ann.annotator_id for ann in annotations
                             if ann.status == "final"})
        if a is not None and b is not None:
            pairs = [(a, b)]
        else:
            pairs = [(x, y) for i, x in enumerate(annotators) for y in annotators[i + 1:]]
        raw = RawConfusionMatrix.zeros()
        counted = False
        for pa, pb in pairs:
            try:
                seq_a, seq_b = aligned_sequences(annotations, pa, pb)
            except AgreementError:
                continue
            build_confusion(seq_a, seq_b, into=raw)
            counted = True
        if not counted:
            raise HTTPException(status_code=400, detail="no co-annotated stories")
        matrix = normalize_confusion(raw) if normalized else raw
        if format != "csv":
            raise HTTPException(status_code=400, detail=f"unsupported format {format!r}")
        return Response(content=confusion_csv(matrix), media_type="text/csv")

    @app.get("/stories/{story_id}/tension")
    def get_tension(story_id: str, annotator: str, format: str = "csv"):
        ann = store.annotations.get((story_id, annotator))
        if ann is None:
            raise HTTPException(
                status_code=404,
                detail=f"no annotation for story {story_id!r} by {annotator!r}")
        try:
            payload = export_curve(tension_curve(ann.labels), format=format)
        except TensionError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        media = "text/csv" if format == "csv" else "image/svg+xml"
        return Response(content=payload, media_type=media)

    # -- plans & training --------------------------------------------------------

    @app.post("/plans/overlap")
    def post_overlap(body: OverlapIn):
        try:
            plan = assign_overlap(body.story_ids, body.annotator_ids, body.k, body.seed)
        except WorkflowError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return plan.to_dict()

    @app.post("/training/diff")
    def post_diff(body: DiffIn):
        gold = None
        for (sid, aid), ann in store.annotations.items():
            annotator = store.annotators.get(aid)
            if sid == body.gold_story_id and annotator \
                    and annotator.role == "gold_author":
                gold = ann
                break
        if gold is None:
            raise HTTPException(
                status_code=404,
                detail=f"no gold annotation for story {body.gold_story_id!r}")
        try:
            submitted = Annotation(
                story_id=body.submitted.story_id,
                annotator_id=body.submitted.annotator_id,
                status=body.submitted.status,
                version=body.submitted.version,
                labels=tuple(Label.parse(v) for v in body.submitted.labels))
            return training_diff(submitted, gold).to_dict()
        except (UnknownLabelError, CorpusError, WorkflowError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    return app
