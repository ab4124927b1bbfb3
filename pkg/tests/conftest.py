import json
from pathlib import Path

import pytest

from storyarc import Story, segment
from storyarc.labels import Label

FIXTURES = Path(__file__).parent / "fixtures"

# Label vector of the canonical hedgehog example, one label per table row.
HEDGEHOG_ROW_LABELS = [
    Label.ABSTRACT,
    Label.ORIENTATION,
    Label.COMPLICATING_ACTION,
    Label.MOST_REPORTABLE_EVENT,
    Label.RESOLUTION,
]

# One label per sentence of the segmented hedgehog story (9 sentences:
# rows split 2/2/2/2/1 by the segmenter).
HEDGEHOG_SENTENCE_LABELS = [
    Label.ABSTRACT, Label.ABSTRACT,
    Label.ORIENTATION, Label.ORIENTATION,
    Label.COMPLICATING_ACTION, Label.COMPLICATING_ACTION,
    Label.MOST_REPORTABLE_EVENT, Label.MOST_REPORTABLE_EVENT,
    Label.RESOLUTION,
]

# The red-shirt joke: orientation, two complicating actions, a minor
# resolution, the MRE, an evaluation, and a return of the MRE.
RED_SHIRT_LABELS = [
    Label.ORIENTATION,
    Label.COMPLICATING_ACTION,
    Label.COMPLICATING_ACTION,
    Label.UNLABELED,
    Label.MINOR_RESOLUTION,
    Label.UNLABELED,
    Label.MOST_REPORTABLE_EVENT,
    Label.EVALUATION,
    Label.RETURN_OF_MRE,
]


@pytest.fixture(scope="session")
def hedgehog_text() -> str:
    return (FIXTURES / "hedgehog_story.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def red_shirt_text() -> str:
    return (FIXTURES / "red_shirt_story.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fifty_story_texts() -> list[dict]:
    out = []
    with open(FIXTURES / "fifty_stories.jsonl", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out


def make_story(story_id: str, text: str, source: str = "other", **kwargs) -> Story:
    return Story(id=story_id, source=source, text=text,
                 sentences=tuple(segment(text)), **kwargs)


@pytest.fixture(scope="session")
def hedgehog_story(hedgehog_text) -> Story:
    return make_story("hedgehog", hedgehog_text, source="quora")
