"""Deterministic rule-based sentence segmentation.

Segmentation runs once at ingest; annotations always reference the stored
segmentation, so these rules must stay reproducible bit-for-bit. The
abbreviation list lives in a versioned data file for the same reason.

Boundary rules:
  * a hard newline always ends a sentence;
  * split after ``.`` ``?`` ``!`` when followed by whitespace and then an
    uppercase letter, digit, or opening quote/parenthesis;
  * terminal punctuation immediately followed by a closing quote or
    parenthesis does not split (quoted speech runs on);
  * no split after a listed abbreviation;
  * ellipsis runs (``..``/``...``) and emoticons never force a split.
"""

from __future__ import annotations

from importlib import resources

from .corpus import Sentence

_OPENERS = "\"“'‘("
_CLOSERS = "\"”'’)"


class SegmentationError(ValueError):
    pass


def _load_abbreviations() -> frozenset[str]:
    raw = resources.files("storyarc.data").joinpath("abbreviations.txt").read_text("utf-8")
    abbrevs = set()
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            abbrevs.add(line.lower())
    return frozenset(abbrevs)


ABBREVIATIONS = _load_abbreviations()


def _ends_with_abbreviation(text: str, i: int) -> bool:
    # token = the maximal non-whitespace run ending at the '.' at position i
    k = i
    while k > 0 and not text[k - 1].isspace():
        k -= 1
    token = text[k:i + 1].lstrip(_OPENERS)
    return token.lower() in ABBREVIATIONS


def segment(text: str) -> list[Sentence]:
    """Split text into ordered, non-overlapping sentences with character spans."""
    if not text.strip():
        raise SegmentationError("cannot segment all-whitespace text")

    sentences: list[Sentence] = []

    def flush(start: int, end: int) -> None:
        chunk = text[start:end]
        stripped = chunk.strip()
        if not stripped:
            return
        s = start + (len(chunk) - len(chunk.lstrip()))
        e = end - (len(chunk) - len(chunk.rstrip()))
        sentences.append(Sentence(index=len(sentences), text=stripped, span=(s, e)))

    n = len(text)
    start = 0
    i = 0
    while i < n:
        ch = text[i]
        if ch == "\n":
            flush(start, i)
            start = i + 1
            i += 1
            continue
        if ch in ".?!":
            if ch == "." and ((i + 1 < n and text[i + 1] == ".")
                              or (i > 0 and text[i - 1] == ".")):
                i += 1  # inside an ellipsis run
                continue
            if ch == "." and _ends_with_abbreviation(text, i):
                i += 1
                continue
            j = i + 1
            if j < n and text[j] in _CLOSERS:
                i += 1  # quoted speech: punctuation belongs to the quote
                continue
            k = j
            while k < n and text[k] in " \t":
                k += 1
            if k > j and k < n and (text[k].isupper() or text[k].isdigit()
                                    or text[k] in _OPENERS):
                flush(start, i + 1)
                start = i + 1
        i += 1
    flush(start, n)
    return sentences
