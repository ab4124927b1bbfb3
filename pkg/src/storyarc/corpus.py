"""Domain types for stories, sentences, annotations, and annotators, plus
JSONL persistence and corpus statistics.

All types are immutable values validated at construction; mutation is
modeled as replacement with an incremented version.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .labels import Label, parse_labels

SOURCES = ("quora", "reddit", "personabank", "other")


class CorpusError(ValueError):
    pass


def normalize_ws(text: str) -> str:
    return " ".join(text.split())


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    span: tuple[int, int]  # half-open character offsets into the story text

    def __post_init__(self):
        start, end = self.span
        if not (0 <= start < end):
            raise CorpusError(f"sentence {self.index}: empty or negative span {self.span}")
        if not self.text.strip():
            raise CorpusError(f"sentence {self.index}: empty text")


@dataclass(frozen=True)
class Story:
    id: str
    source: str
    text: str
    title: Optional[str] = None
    sentences: tuple[Sentence, ...] = ()
    duplicate_of: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise CorpusError("story id must be non-empty")
        if self.source not in SOURCES:
            raise CorpusError(f"story {self.id}: unknown source {self.source!r}")
        object.__setattr__(self, "sentences", tuple(self.sentences))
        prev_end = -1
        for i, sent in enumerate(self.sentences):
            if sent.index != i:
                raise CorpusError(f"story {self.id}: sentence index {sent.index} at position {i}")
            start, end = sent.span
            if start < prev_end:
                raise CorpusError(f"story {self.id}: overlapping spans at sentence {i}")
            if end > len(self.text):
                raise CorpusError(f"story {self.id}: span {sent.span} exceeds text length")
            if sent.text != self.text[start:end].strip():
                raise CorpusError(f"story {self.id}: sentence {i} text does not match its span")
            prev_end = end
        if self.sentences:
            joined = normalize_ws(" ".join(s.text for s in self.sentences))
            if joined != normalize_ws(self.text):
                raise CorpusError(f"story {self.id}: sentences do not reproduce story text")

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class Annotator:
    id: str
    role: str = "annotator"  # trainee | annotator | gold_author

    def __post_init__(self):
        if self.role not in ("trainee", "annotator", "gold_author"):
            raise CorpusError(f"annotator {self.id}: unknown role {self.role!r}")


@dataclass(frozen=True)
class Annotation:
    story_id: str
    annotator_id: str
    status: str  # draft | final
    version: int
    labels: tuple[Label, ...]
    intake_flags: Optional[object] = None

    def __post_init__(self):
        if self.status not in ("draft", "final"):
            raise CorpusError(f"annotation {self.story_id}/{self.annotator_id}: "
                              f"bad status {self.status!r}")
        if self.version < 1:
            raise CorpusError("annotation version must be >= 1")
        object.__setattr__(self, "labels", tuple(parse_labels(self.labels)))

    def check_story(self, story: Story) -> None:
        """Reject a label vector whose length differs from the sentence count."""
        if self.story_id != story.id:
            raise CorpusError(f"annotation references story {self.story_id}, got {story.id}")
        if len(self.labels) != story.sentence_count:
            raise CorpusError(
                f"annotation {self.story_id}/{self.annotator_id}: {len(self.labels)} labels "
                f"for {story.sentence_count} sentences")

    def bump(self, **changes) -> "Annotation":
        return replace(self, version=self.version + 1, **changes)


# ---------------------------------------------------------------------------
# JSONL persistence
# ---------------------------------------------------------------------------

def story_to_record(story: Story) -> dict:
    return {
        "id": story.id,
        "source": story.source,
        "title": story.title,
        "text": story.text,
        "sentences": [{"index": s.index, "span": list(s.span)} for s in story.sentences],
        "duplicate_of": story.duplicate_of,
    }


def story_from_record(rec: dict) -> Story:
    text = rec["text"]
    sentences = tuple(
        Sentence(index=s["index"],
                 text=text[s["span"][0]:s["span"][1]].strip(),
                 span=(s["span"][0], s["span"][1]))
        for s in rec.get("sentences", ())
    )
    return Story(
        id=rec["id"],
        source=rec["source"],
        title=rec.get("title"),
        text=text,
        sentences=sentences,
        duplicate_of=rec.get("duplicate_of"),
    )


def annotation_to_record(ann: Annotation) -> dict:
    return {
        "story_id": ann.story_id,
        "annotator_id": ann.annotator_id,
        "status": ann.status,
        "version": ann.version,
        "labels": [lab.value for lab in ann.labels],
    }


def annotation_from_record(rec: dict) -> Annotation:
    return Annotation(
        story_id=rec["story_id"],
        annotator_id=rec["annotator_id"],
        status=rec["status"],
        version=rec["version"],
        labels=tuple(parse_labels(rec["labels"])),
    )


def _load_jsonl(path: Union[str, Path]) -> Iterable[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: malformed JSON on line {lineno}: {exc}") from exc


def load_corpus(path: Union[str, Path]) -> list[Story]:
    stories: list[Story] = []
    seen: set[str] = set()
    for lineno, rec in _load_jsonl(path):
        try:
            story = story_from_record(rec)
        except CorpusError:
            raise
        except (KeyError, TypeError) as exc:
            raise CorpusError(f"{path}: bad story record on line {lineno}: {exc}") from exc
        if story.id in seen:
            raise CorpusError(f"{path}: duplicate story id {story.id!r} on line {lineno}")
        seen.add(story.id)
        stories.append(story)
    return stories


def save_corpus(stories: Sequence[Story], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for story in stories:
            fh.write(json.dumps(story_to_record(story), ensure_ascii=False) + "\n")


def load_annotations(path: Union[str, Path],
                     stories: Optional[Sequence[Story]] = None) -> list[Annotation]:
    """Load annotations; with stories supplied, label-vector lengths are checked."""
    by_id = {s.id: s for s in stories} if stories is not None else None
    annotations = []
    for lineno, rec in _load_jsonl(path):
        try:
            ann = annotation_from_record(rec)
        except (KeyError, TypeError) as exc:
            raise CorpusError(f"{path}: bad annotation record on line {lineno}: {exc}") from exc
        if by_id is not None:
            if ann.story_id not in by_id:
                raise CorpusError(f"{path}: line {lineno}: unknown story id {ann.story_id!r}")
            ann.check_story(by_id[ann.story_id])
        annotations.append(ann)
    return annotations


def save_annotations(annotations: Sequence[Annotation], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ann in annotations:
            fh.write(json.dumps(annotation_to_record(ann), ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Corpus statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StatsReport:
    story_count: int
    sentence_count: int
    mean_sentences_per_story: float  # 2 decimal places
    label_frequency_table: dict = field(default_factory=dict)
    unique_story_count: Optional[int] = None
    unique_sentence_count: Optional[int] = None
    mean_sentences_per_unique_story: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "story_count": self.story_count,
            "sentence_count": self.sentence_count,
            "mean_sentences_per_story": self.mean_sentences_per_story,
            "label_frequency_table": dict(self.label_frequency_table),
            "unique_story_count": self.unique_story_count,
            "unique_sentence_count": self.unique_sentence_count,
            "mean_sentences_per_unique_story": self.mean_sentences_per_unique_story,
        }


def corpus_stats(stories: Sequence[Story],
                 annotations: Sequence[Annotation] = ()) -> StatsReport:
    """Story/sentence counts, means to 2 decimals, and label frequencies over
    final annotations. When duplicates are flagged, the unique population is
    reported alongside the full one.
    """
    by_id = {s.id: s for s in stories}
    story_count = len(stories)
    sentence_count = sum(s.sentence_count for s in stories)
    mean = round(sentence_count / story_count, 2) if story_count else 0.0

    freq: Counter = Counter()
    for ann in annotations:
        if ann.story_id not in by_id:
            raise CorpusError(f"annotation references unknown story id {ann.story_id!r}")
        if ann.status == "final":
            freq.update(lab.value for lab in ann.labels)

    unique_count = unique_sentences = unique_mean = None
    if any(s.duplicate_of for s in stories):
        uniques = [s for s in stories if not s.duplicate_of]
        unique_count = len(uniques)
        unique_sentences = sum(s.sentence_count for s in uniques)
        unique_mean = round(unique_sentences / unique_count, 2) if unique_count else 0.0

    return StatsReport(
        story_count=story_count,
        sentence_count=sentence_count,
        mean_sentences_per_story=mean,
        label_frequency_table=dict(freq),
        unique_story_count=unique_count,
        unique_sentence_count=unique_sentences,
        mean_sentences_per_unique_story=unique_mean,
    )
