"""Narrative function labels, story-frame classification, and the theory crosswalk."""

from __future__ import annotations

from enum import Enum
from typing import Optional, Sequence, Union


class Label(str, Enum):
    ABSTRACT = "abstract"
    ORIENTATION = "orientation"
    COMPLICATING_ACTION = "complicating_action"
    MOST_REPORTABLE_EVENT = "most_reportable_event"
    MINOR_RESOLUTION = "minor_resolution"
    RETURN_OF_MRE = "return_of_mre"
    RESOLUTION = "resolution"
    AFTERMATH = "aftermath"
    EVALUATION = "evaluation"
    DIRECT_COMMENT = "direct_comment"
    UNLABELED = "unlabeled"

    @classmethod
    def parse(cls, value: str) -> "Label":
        try:
            return cls(value)
        except ValueError:
            raise UnknownLabelError(f"unknown label: {value!r}") from None


class UnknownLabelError(ValueError):
    pass


# Axis order used for all matrix output and display.
CANONICAL_ORDER: tuple[Label, ...] = (
    Label.UNLABELED,
    Label.ABSTRACT,
    Label.ORIENTATION,
    Label.COMPLICATING_ACTION,
    Label.MOST_REPORTABLE_EVENT,
    Label.RESOLUTION,
    Label.AFTERMATH,
    Label.EVALUATION,
    Label.RETURN_OF_MRE,
    Label.MINOR_RESOLUTION,
    Label.DIRECT_COMMENT,
)

LABEL_INDEX: dict[Label, int] = {lab: i for i, lab in enumerate(CANONICAL_ORDER)}

DISPLAY_NAMES: dict[Label, str] = {
    Label.UNLABELED: "Unlabeled",
    Label.ABSTRACT: "Abstract",
    Label.ORIENTATION: "Orientation",
    Label.COMPLICATING_ACTION: "Complicating Action",
    Label.MOST_REPORTABLE_EVENT: "MRE",
    Label.RESOLUTION: "Resolution",
    Label.AFTERMATH: "Aftermath",
    Label.EVALUATION: "Evaluation",
    Label.RETURN_OF_MRE: "Return of MRE",
    Label.MINOR_RESOLUTION: "Minor Resolution",
    Label.DIRECT_COMMENT: "Direct Comment",
}


class FrameClass(str, Enum):
    IN_FRAME = "in_frame"
    OUT_OF_FRAME = "out_of_frame"
    NEUTRAL = "neutral"


_FRAME: dict[Label, FrameClass] = {
    Label.ABSTRACT: FrameClass.OUT_OF_FRAME,
    Label.EVALUATION: FrameClass.OUT_OF_FRAME,
    Label.DIRECT_COMMENT: FrameClass.OUT_OF_FRAME,
    Label.ORIENTATION: FrameClass.IN_FRAME,
    Label.COMPLICATING_ACTION: FrameClass.IN_FRAME,
    Label.MOST_REPORTABLE_EVENT: FrameClass.IN_FRAME,
    Label.MINOR_RESOLUTION: FrameClass.IN_FRAME,
    Label.RESOLUTION: FrameClass.IN_FRAME,
    Label.AFTERMATH: FrameClass.IN_FRAME,
    Label.RETURN_OF_MRE: FrameClass.IN_FRAME,
    Label.UNLABELED: FrameClass.NEUTRAL,
}


def frame_class(label: Union[Label, str]) -> FrameClass:
    """Classify a label as inside, outside, or neutral to the story frame."""
    if not isinstance(label, Label):
        label = Label.parse(label)
    return _FRAME[label]


def parse_labels(values: Sequence[Union[Label, str]]) -> list[Label]:
    return [v if isinstance(v, Label) else Label.parse(v) for v in values]


# ---------------------------------------------------------------------------
# Theory crosswalk
# ---------------------------------------------------------------------------

THEORIES = ("freytag", "labov_waletzky", "prince", "todorov", "ours")

# Rows align corresponding stages across theories; None marks a stage a
# theory does not name.
_CROSSWALK_ROWS: tuple[tuple[Optional[str], ...], ...] = (
    ("Exposition", "Orientation", "Starting State", "Old Equilibrium", "Orientation"),
    ("Rising Action", "Complicating Actions", None, "Disruption", "Complicating Actions"),
    ("Climax", "Most Reportable Event", "State-changing Event",
     "Efforts to repair the disruption", "Most Reportable Event"),
    ("Falling Action", "Resolution", "Ending State", None, "(Minor) Resolution"),
    ("Dénouement", "Coda", None, "New Equilibrium", None),
)


class CrosswalkError(ValueError):
    pass


def crosswalk(term: str, source: str, target: str) -> Optional[str]:
    """Map a stage term from one narrative theory's column to another's.

    Returns None when the corresponding cell is blank for the target theory.
    Raises CrosswalkError for an unknown theory or a term not present in the
    source theory's column.
    """
    for theory in (source, target):
        if theory not in THEORIES:
            raise CrosswalkError(f"unknown theory: {theory!r}")
    src_col = THEORIES.index(source)
    tgt_col = THEORIES.index(target)
    wanted = term.strip().lower()
    for row in _CROSSWALK_ROWS:
        cell = row[src_col]
        if cell is not None and cell.lower() == wanted:
            return row[tgt_col]
    raise CrosswalkError(f"term {term!r} not found in theory {source!r}")
