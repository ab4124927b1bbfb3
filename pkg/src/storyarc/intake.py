"""Story selection criteria: automatic word/dialogue checks combined with
annotator-asserted judgments (MRE presence, single story, proportion of
non-narrative text, offensiveness).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .corpus import Story
from .segmenter import segment

MIN_WORDS_EXCLUSIVE = 90   # accepted iff word_count > 90
MAX_WORDS_EXCLUSIVE = 700  # accepted iff word_count < 700
MAX_DIALOGUE_LINES_EXCLUSIVE = 6

REASON_TOO_SHORT = "too_short"
REASON_TOO_LONG = "too_long"
REASON_TOO_MUCH_DIALOGUE = "too_much_dialogue"
REASON_NO_MRE = "no_mre"
REASON_MULTI_STORY = "multi_story"
REASON_TOO_MUCH_NON_NARRATIVE = "too_much_non_narrative"
REASON_OFFENSIVE = "offensive"

_QUOTE_RE = re.compile(r'"([^"]+)"|“([^”]+)”')


class IntakeError(ValueError):
    pass


@dataclass(frozen=True)
class IntakeFlags:
    """Annotator-asserted judgments; all four must be set before a decision."""
    has_mre: Optional[bool] = None
    single_story: Optional[bool] = None
    non_narrative_below_half: Optional[bool] = None
    offensive: Optional[bool] = None

    def require_complete(self) -> None:
        missing = [name for name in ("has_mre", "single_story",
                                     "non_narrative_below_half", "offensive")
                   if getattr(self, name) is None]
        if missing:
            raise IntakeError("intake flags must be asserted before a decision; "
                              "missing: " + ", ".join(missing))


@dataclass(frozen=True)
class IntakeDecision:
    accepted: bool
    word_count: int
    dialogue_line_count: int
    reasons: tuple[str, ...]

    def __post_init__(self):
        if self.accepted != (not self.reasons):
            raise IntakeError("accepted must be true iff reasons is empty")

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "word_count": self.word_count,
            "dialogue_line_count": self.dialogue_line_count,
            "reasons": list(self.reasons),
        }


def count_words(text: str) -> int:
    """Maximal non-whitespace runs; punctuation is not a separator."""
    return len(text.split())


def count_dialogue_lines(text: str) -> int:
    """Sentences containing a double-quoted span of at least two words.

    Sentence-scoped rather than typographic-line-scoped, since online
    stories rarely preserve line breaks.
    """
    if not text.strip():
        return 0
    count = 0
    for sentence in segment(text):
        for match in _QUOTE_RE.finditer(sentence.text):
            quoted = match.group(1) or match.group(2)
            if len(quoted.split()) >= 2:
                count += 1
                break
    return count


def evaluate_intake(story: Story, flags: IntakeFlags) -> IntakeDecision:
    """Apply the selection criteria; the title is excluded from the limits."""
    flags.require_complete()
    word_count = count_words(story.text)
    dialogue = count_dialogue_lines(story.text)

    reasons = []
    if word_count <= MIN_WORDS_EXCLUSIVE:
        reasons.append(REASON_TOO_SHORT)
    if word_count >= MAX_WORDS_EXCLUSIVE:
        reasons.append(REASON_TOO_LONG)
    if dialogue >= MAX_DIALOGUE_LINES_EXCLUSIVE:
        reasons.append(REASON_TOO_MUCH_DIALOGUE)
    if not flags.has_mre:
        reasons.append(REASON_NO_MRE)
    if not flags.single_story:
        reasons.append(REASON_MULTI_STORY)
    if not flags.non_narrative_below_half:
        reasons.append(REASON_TOO_MUCH_NON_NARRATIVE)
    if flags.offensive:
        reasons.append(REASON_OFFENSIVE)

    return IntakeDecision(
        accepted=not reasons,
        word_count=word_count,
        dialogue_line_count=dialogue,
        reasons=tuple(reasons),
    )
